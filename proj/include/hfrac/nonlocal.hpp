#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "calculus.hpp"
#include "sphere.hpp"

namespace hfrac {

enum class Regime { subcritical, critical, supercritical };

inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    default: return "supercritical";
    }
}

struct FracParams {
    int n = 1;
    double s = 0.5;
    double p = 2.0;
    HomNorm norm{};
    std::optional<double> epsilon;   // only meaningful when sp >= Q

    int Q() const { return homogeneous_dimension(n); }

    Regime regime() const {
        const double sp = s * p, q = Q();
        if (std::abs(sp - q) <= 1e-12 * q) return Regime::critical;
        return sp < q ? Regime::subcritical : Regime::supercritical;
    }

    double p_star() const {
        if (regime() != Regime::subcritical) throw DomainError("p* is defined only for sp < Q");
        return Q() * p / (Q() - s * p);
    }

    double s_eps() const {
        if (!epsilon) throw DomainError("epsilon is not set");
        return s - *epsilon;
    }

    double p_star_eps() const { return Q() * p / (Q() - s_eps() * p); }

    void validate() const {
        if (n < 1) throw DomainError("n must be a positive integer");
        if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0,1)");
        if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must lie in (1,inf)");
        if (!(norm.lambda_equiv >= 1.0)) throw DomainError("norm equivalence constant must be >= 1");
        if (epsilon) {
            const double lo = std::max(0.0, s - Q() / p);
            if (!(*epsilon > lo && *epsilon < s))
                throw DomainError("epsilon must lie in (max(0, s - Q/p), s)");
        }
    }
};

struct QuadConfig {
    double rho_in = 1e-3;
    double rho_out = 16.0;           // used only when u has no known far field
    int nodes_per_decade = 32;
    std::size_t angular_samples = 8192;
    std::size_t c2_samples = 1 << 18;
    std::uint64_t seed = 20240611;

    void validate() const {
        if (!(rho_in > 0.0) || !(rho_out > rho_in)) throw DomainError("need 0 < rho_in < rho_out");
        if (nodes_per_decade < 8) throw DomainError("need at least 8 radial nodes per decade");
        if (angular_samples < 2 || c2_samples < 2) throw DomainError("sample counts must be >= 2");
    }
};

// Stream tags so that distinct uses of one seed never share draws.
enum : std::uint64_t { kTagDirections = 1, kTagC2 = 2, kTagMesh = 3, kTagHarness = 4 };

// ---- constants ------------------------------------------------------------

namespace detail {

// int_{S^{d-1}} cos(r w_1) dw = (2 pi)^{d/2} r^{1-d/2} J_{d/2-1}(r)
inline double sphere_cos_average(int d, double r) {
    const double nu = 0.5 * d - 1.0;
    return std::pow(2.0 * std::numbers::pi, 0.5 * d) * std::pow(r, -nu) * std::cyl_bessel_j(nu, r);
}

// int_{R^d} (1 - cos x_1) / |x|^{d+2s} dx, split at r = 1.
inline double c1_integral(int d, double s, double L, double panel) {
    const double area = euclidean_sphere_area(d);
    // r < 1: Taylor series of the angular average, int w_1^{2k} = area (2k-1)!!/(d(d+2)...(d+2k-2)).
    double inner = 0.0, moment = area, fact = 1.0;
    for (int k = 1; k < 40; ++k) {
        moment *= (2.0 * k - 1.0) / (d + 2.0 * k - 2.0);
        fact *= (2.0 * k - 1.0) * (2.0 * k);
        const double term = moment / (fact * (2.0 * k - 2.0 * s));
        inner += (k % 2 == 1) ? term : -term;
        if (term < 1e-18 * std::abs(inner)) break;
    }
    static constexpr double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                     0.8611363115940526};
    static constexpr double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                     0.3478548451374538};
    double osc = 0.0;
    for (double a = 1.0; a < L; a += panel) {
        const double b = std::min(a + panel, L), mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int q = 0; q < 4; ++q) {
            const double r = mid + half * gx[q];
            osc += half * gw[q] * std::pow(r, -1.0 - 2.0 * s) * sphere_cos_average(d, r);
        }
    }
    return inner + area / (2.0 * s) - osc;
}

} // namespace detail

// c1(n,s): reciprocal of the Euclidean integral over R^{2n+1}.
inline double c1_constant(int n, double s) {
    if (n < 1) throw DomainError("n must be a positive integer");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0,1)");
    const int d = 2 * n + 1;
    const double pi = std::numbers::pi;
    const double coarse = detail::c1_integral(d, s, 400.0, pi / 4.0);
    const double fine = detail::c1_integral(d, s, 800.0, pi / 8.0);
    if (!(std::abs(fine - coarse) <= 1e-4 * std::abs(fine)))
        throw ConvergenceError("c1 quadrature did not converge");
    return 1.0 / fine;
}

// int over the Koranyi unit sphere of z_i^2 d sigma (index i in 0..2n-1).
// On the sphere |eta| = 1, so the kernel factor drops out and the value does
// not depend on s.
template <int N>
Estimate c2_component(int i, const QuadConfig& quad) {
    if (i < 0 || i >= 2 * N) throw DomainError("horizontal index out of range");
    const auto rule = sphere_rule<N>(quad.c2_samples, mix_seed(quad.seed, kTagC2));
    const std::size_t M = rule.size(), half = M / 2;
    double s1 = 0, s2 = 0, sq = 0;
    for (std::size_t k = 0; k < M; ++k) {
        const double v = rule.nodes[k][i] * rule.nodes[k][i];
        (k < half ? s1 : s2) += v;
        sq += v * v;
    }
    const double mean = (s1 + s2) / M;
    const double var = std::max(0.0, sq / M - mean * mean);
    const double a = s1 / half, b = s2 / (M - half);
    if (std::abs(a - b) > 0.05 * mean) throw ConvergenceError("c2 Monte-Carlo halves disagree");
    return {rule.total * mean, rule.total * std::sqrt(var / M)};
}

template <int N>
Estimate c2_constant(double s, const QuadConfig& quad) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0,1)");
    return c2_component<N>(0, quad);
}

// C(n,s) = c1 omega_{2n} / ((2n+1) c2). The factor 2n+1 (the dimension of the
// Euclidean space in which c1 is defined) is what makes (-Delta)^s tend to
// -Delta_H as s -> 1; see README.
inline double frac_constant_from(int n, double c1, double c2) {
    return c1 * euclidean_sphere_area(2 * n + 1) / ((2.0 * n + 1.0) * c2);
}

template <int N>
double frac_constant(double s, const QuadConfig& quad) {
    return frac_constant_from(N, c1_constant(N, s), c2_constant<N>(s, quad).value);
}

// ---- polar quadrature ---------------------------------------------------

struct PolarSum {
    double value = 0.0;
    double mc_error = 0.0;
    double radial_error = 0.0;
};

// sum_k weight sum_m w_m F(r_m, omega_k) with a coarser radial rule for the
// radial error estimate and per-direction spread for the Monte-Carlo error.
template <int N, typename F>
PolarSum polar_sum(const SphereRule<N>& rule, double r0, double r1, int npd, const F& f) {
    PolarSum out;
    if (!(r1 > r0)) return out;
    const RadialRule fine = log_radial_rule(r0, r1, npd);
    const RadialRule coarse = log_radial_rule(r0, r1, std::max(4, npd / 2));
    double sum = 0.0, sq = 0.0, csum = 0.0;
    for (const auto& om : rule.nodes) {
        double I = 0.0, Ic = 0.0;
        for (std::size_t m = 0; m < fine.r.size(); ++m) I += fine.w[m] * f(fine.r[m], om);
        for (std::size_t m = 0; m < coarse.r.size(); ++m) Ic += coarse.w[m] * f(coarse.r[m], om);
        sum += I;
        sq += I * I;
        csum += Ic;
    }
    const double M = static_cast<double>(rule.size());
    const double mean = sum / M;
    out.value = rule.total * mean;
    out.mc_error = rule.total * std::sqrt(std::max(0.0, sq / M - mean * mean) / M);
    out.radial_error = std::abs(rule.total * (sum - csum) / M);
    return out;
}

namespace detail {

// Radius beyond which u(xi o zeta) sits in the far field for |zeta| >= radius.
template <int N>
double far_radius(const FarField<N>& far, const Point<N>& xi) {
    return far.radius + koranyi_norm(increment(far.center, xi));
}

inline double phi_p(double a, double p) {
    if (p == 2.0) return a;
    return a == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(a), p - 1.0), a);
}

} // namespace detail

// (-Delta_H)^s u(xi) = -(C/2) int (u(xi o eta) + u(xi o eta^{-1}) - 2u(xi)) |eta|^{-Q-2s} d eta.
// |eta| < rho_in uses the second-order expansion, integrated exactly.
template <int N>
Estimate frac_sublaplacian(const SmoothFunction<N>& u, const Point<N>& xi, const FracParams& params,
                           const QuadConfig& quad) {
    params.validate();
    quad.validate();
    if (params.n != N) throw DomainError("params.n does not match the point dimension");
    if (params.p != 2.0) throw DomainError("the fractional sublaplacian needs p = 2");
    const double s = params.s;
    const auto rule = sphere_rule<N>(quad.angular_samples, mix_seed(quad.seed, kTagDirections));
    const Estimate c2 = c2_constant<N>(s, quad);
    const double C = frac_constant_from(N, c1_constant(N, s), c2.value);
    const double u0 = u(xi);

    double rho_out, far_mid = 0.0, far_half = 0.0;
    if (u.far) {
        rho_out = std::max(detail::far_radius(*u.far, xi), 2.0 * quad.rho_in);
        far_mid = (2.0 * u.far->value - 2.0 * u0) * rule.total * std::pow(rho_out, -2.0 * s) / (2.0 * s);
    } else if (u.bound) {
        rho_out = quad.rho_out;
        const double K = rule.total * std::pow(rho_out, -2.0 * s) / (2.0 * s);
        far_mid = -2.0 * u0 * K;
        far_half = 2.0 * *u.bound * K;
    } else {
        throw DomainError("u is not bounded on the far field");
    }

    const double near = sublaplacian(u, xi) * c2.value * std::pow(quad.rho_in, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    const auto mid = polar_sum<N>(rule, quad.rho_in, rho_out, quad.nodes_per_decade, [&](double r, const Point<N>& om) {
        const Point<N> eta = dilate(r, om);
        return std::pow(r, -2.0 * s) * (u(group_mul(xi, eta)) + u(group_mul(xi, group_inv(eta))) - 2.0 * u0);
    });
    const double I = near + mid.value + far_mid;
    Estimate out;
    out.value = -0.5 * C * I;
    out.error = 0.5 * C *
                (std::hypot(mid.mc_error, mid.radial_error) + far_half +
                 std::abs(mid.value + far_mid) * c2.error / c2.value);
    return out;
}

// PV of the nonlinear operator with kernel d_o^{-Q-sp}. |zeta| < rho_in is
// extrapolated from the power law of the innermost radial samples.
template <int N>
Estimate p_operator(const SmoothFunction<N>& u, const Point<N>& xi, const FracParams& params,
                    const QuadConfig& quad) {
    params.validate();
    quad.validate();
    if (params.n != N) throw DomainError("params.n does not match the point dimension");
    const double s = params.s, p = params.p, sp = s * p;
    const double Q = params.Q();
    const auto rule = sphere_rule<N>(quad.angular_samples, mix_seed(quad.seed, kTagDirections));
    std::vector<double> kern(rule.size());
    double kern_sum = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        kern[k] = params.norm.kind == NormKind::koranyi ? 1.0 : std::pow(params.norm(rule.nodes[k]), -Q - sp);
        kern_sum += kern[k];
    }
    const double u0 = u(xi);
    auto S = [&](double r, const Point<N>& om) {
        const Point<N> z = dilate(r, om);
        return 0.5 * (detail::phi_p(u0 - u(group_mul(xi, z)), p) +
                      detail::phi_p(u0 - u(group_mul(xi, group_inv(z))), p));
    };

    double rho_out, far_mid = 0.0, far_half = 0.0;
    auto far_kernel = [&](double rho) { return rule.weight * kern_sum * std::pow(rho, -sp) / sp; };
    if (u.far) {
        rho_out = std::max(detail::far_radius(*u.far, xi), 2.0 * quad.rho_in);
        far_mid = detail::phi_p(u0 - u.far->value, p) * far_kernel(rho_out);
    } else if (u.bound) {
        rho_out = quad.rho_out;
        const double lo = detail::phi_p(u0 - *u.bound, p), hi = detail::phi_p(u0 + *u.bound, p);
        far_mid = 0.5 * (lo + hi) * far_kernel(rho_out);
        far_half = 0.5 * (hi - lo) * far_kernel(rho_out);
    } else {
        throw DomainError("u is not bounded on the far field");
    }

    // total radial integrand (in d log r) at radius r
    auto F = [&](double r) {
        double acc = 0.0;
        for (std::size_t k = 0; k < rule.size(); ++k) acc += kern[k] * S(r, rule.nodes[k]);
        return rule.weight * std::pow(r, -sp) * acc;
    };
    const double F1 = F(quad.rho_in), F2 = F(0.5 * quad.rho_in), F3 = F(0.25 * quad.rho_in);
    double near = 0.0, near_err = 0.0;
    const double nominal = std::max(p * (1.0 - s), 0.05);
    if (F1 != 0.0 || F2 != 0.0) {
        const bool same = (F1 > 0) == (F2 > 0) && F1 != 0.0 && F2 != 0.0;
        const double g12 = same ? std::log2(F1 / F2) : 0.0;
        if (same && g12 > 1e-3) {
            near = F1 / g12;
            const bool same23 = (F2 > 0) == (F3 > 0) && F3 != 0.0;
            const double g23 = same23 ? std::log2(F2 / F3) : 0.0;
            near_err = g23 > 1e-3 ? std::abs(F1 / g12 - F1 / g23) : std::abs(near);
        } else {
            near_err = std::abs(F1) / nominal;
        }
    }
    const auto mid = polar_sum<N>(rule, quad.rho_in, rho_out, quad.nodes_per_decade, [&](double r, const Point<N>& om) {
        const std::size_t k = static_cast<std::size_t>(&om - rule.nodes.data());
        return std::pow(r, -sp) * kern[k] * S(r, om);
    });
    Estimate out;
    out.value = near + mid.value + far_mid;
    out.error = std::hypot(mid.mc_error, mid.radial_error) + near_err + far_half;
    return out;
}

// Tail(u; xi0, R) = (R^{sp} int_{|xi0^{-1} o eta| >= R} |u|^{p-1} |xi0^{-1} o eta|^{-Q-sp})^{1/(p-1)},
// always with the Koranyi gauge.
template <int N>
Estimate tail(const SmoothFunction<N>& u, const Point<N>& xi0, double R, const FracParams& params,
              const QuadConfig& quad) {
    params.validate();
    quad.validate();
    if (!(R > 0.0)) throw DomainError("tail radius must be positive");
    const double sp = params.s * params.p, q = params.p - 1.0;
    const auto rule = sphere_rule<N>(quad.angular_samples, mix_seed(quad.seed, kTagDirections));
    double rho_out, far = 0.0, far_err = 0.0;
    if (u.far) {
        rho_out = std::max(R, detail::far_radius(*u.far, xi0));
        far = std::pow(std::abs(u.far->value), q) * rule.total * std::pow(rho_out, -sp) / sp;
    } else if (u.bound) {
        rho_out = std::max(R, quad.rho_out);
        far_err = std::pow(*u.bound, q) * rule.total * std::pow(rho_out, -sp) / sp;
        far = 0.5 * far_err;
        far_err *= 0.5;
    } else {
        throw DomainError("tail diverges: u has neither a far-field value nor a bound");
    }
    const auto mid = polar_sum<N>(rule, R, rho_out, quad.nodes_per_decade, [&](double r, const Point<N>& om) {
        return std::pow(r, -sp) * std::pow(std::abs(u(group_mul(xi0, dilate(r, om)))), q);
    });
    const double J = std::pow(R, sp) * (mid.value + far);
    const double dJ = std::pow(R, sp) * (std::hypot(mid.mc_error, mid.radial_error) + far_err);
    Estimate out;
    out.value = J > 0.0 ? std::pow(J, 1.0 / q) : 0.0;
    out.error = J > 0.0 ? out.value * dJ / (q * J) : 0.0;
    return out;
}

// M_ij = int_{B_1} z_i z_j |eta|^{-Q-2s} d eta; the radial factor is 1/(2-2s).
template <int N>
std::vector<std::vector<Estimate>> second_moment_matrix(double s, const QuadConfig& quad) {
    const auto rule = sphere_rule<N>(quad.c2_samples, mix_seed(quad.seed, kTagC2));
    const double M = static_cast<double>(rule.size());
    const double radial = 1.0 / (2.0 - 2.0 * s);
    std::vector<std::vector<Estimate>> out(2 * N, std::vector<Estimate>(2 * N));
    for (int i = 0; i < 2 * N; ++i)
        for (int j = 0; j < 2 * N; ++j) {
            double sum = 0, sq = 0;
            for (const auto& om : rule.nodes) {
                const double v = om[i] * om[j];
                sum += v;
                sq += v * v;
            }
            const double mean = sum / M;
            out[i][j] = {rule.total * radial * mean,
                         rule.total * radial * std::sqrt(std::max(0.0, sq / M - mean * mean) / M)};
        }
    return out;
}

struct AsymptoticsRow {
    double s = 0.0;
    double frac_value = 0.0;
    double quad_error = 0.0;
    double limit_value = 0.0;
    double abs_error = 0.0;
};

template <int N>
std::vector<AsymptoticsRow> asymptotics_sweep(const SmoothFunction<N>& u, const Point<N>& xi,
                                              const std::vector<double>& s_list, const QuadConfig& quad) {
    for (std::size_t k = 1; k < s_list.size(); ++k)
        if (!(s_list[k] > s_list[k - 1])) throw DomainError("s_list must be increasing");
    const double limit = -sublaplacian(u, xi);
    std::vector<AsymptoticsRow> rows;
    for (double s : s_list) {
        FracParams prm;
        prm.n = N;
        prm.s = s;
        const auto e = frac_sublaplacian(u, xi, prm, quad);
        rows.push_back({s, e.value, e.error, limit, std::abs(e.value - limit)});
    }
    return rows;
}

} // namespace hfrac
