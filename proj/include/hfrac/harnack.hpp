#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "discrete.hpp"
#include "solver.hpp"

namespace hfrac {

struct BallStats {
    double radius = 0.0;
    double sup = 0.0;
    double inf = 0.0;
    double measure = 0.0;               // sum of node weights in the ball
    std::size_t count = 0;
    std::vector<double> exponents;
    std::vector<double> means;          // (avg u^t)^{1/t}; t = 0 is the geometric mean
};

namespace detail {

template <int N>
std::vector<std::size_t> ball_nodes(const Mesh<N>& m, const Point<N>& xi0, double r, bool interior_only) {
    std::vector<std::size_t> idx;
    const std::size_t end = interior_only ? m.n_interior : m.size();
    for (std::size_t i = 0; i < end; ++i)
        if (koranyi_norm(increment(xi0, m.nodes[i])) < r) idx.push_back(i);
    return idx;
}

inline double power_mean(const std::vector<double>& w, const std::vector<double>& v, double t) {
    double W = 0.0;
    std::vector<double> a(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) W += w[k];
    if (t == 0.0) {
        for (std::size_t k = 0; k < v.size(); ++k) a[k] = w[k] * std::log(v[k]);
        return std::exp(tree_sum(a) / W);
    }
    for (std::size_t k = 0; k < v.size(); ++k) a[k] = w[k] * std::pow(v[k], t);
    return std::pow(tree_sum(a) / W, 1.0 / t);
}

} // namespace detail

template <int N>
BallStats ball_stats(const DiscreteFunction<N>& u, const Point<N>& xi0, double r, const std::vector<double>& exponents) {
    const auto& m = u.grid();
    const auto idx = detail::ball_nodes(m, xi0, r, true);
    if (idx.empty()) throw DomainError("ball contains no interior node");
    BallStats b;
    b.radius = r;
    b.count = idx.size();
    b.sup = -std::numeric_limits<double>::infinity();
    b.inf = std::numeric_limits<double>::infinity();
    std::vector<double> w, v;
    for (std::size_t i : idx) {
        b.sup = std::max(b.sup, u.values[i]);
        b.inf = std::min(b.inf, u.values[i]);
        b.measure += m.weights[i];
        w.push_back(m.weights[i]);
        v.push_back(u.values[i]);
    }
    b.exponents = exponents;
    for (double t : exponents) {
        const bool integral = t == std::floor(t) && t > 0.0;
        if (!integral && b.inf < 0.0) throw DomainError("negative values under a fractional exponent");
        if (t < 0.0) throw DomainError("mean exponents must be nonnegative");
        if (t == 0.0 && b.inf <= 0.0) {
            b.means.push_back(0.0);
            continue;
        }
        b.means.push_back(detail::power_mean(w, v, t));
    }
    return b;
}

// One row per inequality evaluation. lhs <= c (term_main + term_tail + term_f)
// and c_star is the smallest c making it an equality.
struct HarnackReport {
    std::string check;
    FracParams params;
    double h = 0.0;
    double r = 0.0, R = 0.0;
    double t = std::numeric_limits<double>::quiet_NaN();
    double lhs = 0.0;
    double sup = 0.0, inf = 0.0;
    double tail = 0.0;          // Tail(u_-; xi0, R)
    double term_main = 0.0;
    double term_tail = 0.0;
    double term_f = 0.0;
    double f_norm = 0.0;
    double chi = 0.0;
    std::string regime;
    double c_star = 0.0;
    double c_main = 0.0, c_tail = 0.0, c_f = 0.0;   // per-term constants
};

namespace detail {

inline double per_term(double lhs, double term) {
    if (term > 0.0) return lhs / term;
    return lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline void finish(HarnackReport& rep) {
    const double rhs = rep.term_main + rep.term_tail + rep.term_f;
    if (rhs > 0.0) rep.c_star = std::max(0.0, rep.lhs / rhs);
    else if (rep.lhs > 0.0) throw DomainError("unverifiable", "inequality unverifiable at this resolution");
    else rep.c_star = 0.0;
    rep.c_main = per_term(rep.lhs, rep.term_main);
    rep.c_tail = per_term(rep.lhs, rep.term_tail);
    rep.c_f = per_term(rep.lhs, rep.term_f);
}

template <int N>
void require_inside(const Mesh<N>& m, const Point<N>& xi0, double R) {
    if (koranyi_norm(increment(m.center, xi0)) + R > m.radius * (1.0 + 1e-12))
        throw GeometryError("B_R(xi0) is not contained in the domain");
}

template <int N>
void require_nonnegative(const DiscreteFunction<N>& u, const Point<N>& xi0, double R) {
    const auto idx = ball_nodes(u.grid(), xi0, R, true);
    double sup = 0.0;
    for (std::size_t i : idx) sup = std::max(sup, std::abs(u.values[i]));
    for (std::size_t i : idx)
        if (u.values[i] < -1e-12 * sup) throw DomainError("u must be nonnegative in B_R");
}

template <int N>
double f_norm(const DiscreteFunction<N>& u, const std::vector<double>& f, const Point<N>& xi0, double R) {
    if (f.size() != u.grid().n_interior) throw DomainError("f must be sampled on the interior nodes");
    double m = 0.0;
    for (std::size_t i : ball_nodes(u.grid(), xi0, R, true)) m = std::max(m, std::abs(f[i]));
    return m;
}

} // namespace detail

inline double chi_term(const FracParams& params, double r, double f_norm, double t) {
    params.validate();
    if (!(r > 0.0) || f_norm < 0.0) throw DomainError("chi needs r > 0 and f_norm >= 0");
    const double Q = params.Q(), s = params.s, p = params.p, sp = s * p;
    if (params.regime() == Regime::subcritical) {
        if (!(t > 0.0 && t < Q * (p - 1.0) / (Q - sp))) throw DomainError("t outside (0, Q(p-1)/(Q-sp))");
        return std::pow(r, Q * sp / (t * (Q - sp))) * std::pow(f_norm, Q / (t * (Q - sp)));
    }
    if (!params.epsilon) throw DomainError("epsilon must be set when sp >= Q");
    const double e = *params.epsilon;
    if (!(t > 0.0 && t < (p - 1.0) * s / e)) throw DomainError("t outside (0, (p-1)s/epsilon)");
    return std::pow(r, Q * (s - e) / (t * e)) * std::pow(f_norm, s / (t * e));
}

inline double boundedness_gamma(const FracParams& params) {
    return (params.p - 1.0) * params.Q() / (params.s * params.p * params.p);
}

// sup_{B_r} u <= c inf_{B_r} u + c (r/R)^{sp/(p-1)} Tail(u_-) + c r^{sp/(p-1)} ||f||^{1/(p-1)}
template <int N>
HarnackReport harnack_constant(const DiscreteFunction<N>& u, const std::vector<double>& f, const FracParams& params,
                               const Point<N>& xi0, double r, double R, const SphereRule<N>& rule) {
    params.validate();
    const auto& m = u.grid();
    if (!(r > 0.0) || 6.0 * r > R * (1.0 + 1e-12)) throw GeometryError("B_6r is not contained in B_R");
    detail::require_inside(m, xi0, R);
    detail::require_nonnegative(u, xi0, R);
    const double e = params.s * params.p / (params.p - 1.0);
    HarnackReport rep;
    rep.check = "harnack";
    rep.params = params;
    rep.h = m.h;
    rep.r = r;
    rep.R = R;
    const auto b = ball_stats(u, xi0, r, {});
    rep.sup = b.sup;
    rep.inf = b.inf;
    rep.lhs = b.sup;
    rep.tail = tail(u, xi0, R, params, rule, Part::negative);
    rep.f_norm = detail::f_norm(u, f, xi0, R);
    rep.term_main = b.inf;
    rep.term_tail = std::pow(r / R, e) * rep.tail;
    rep.term_f = std::pow(r, e) * std::pow(rep.f_norm, 1.0 / (params.p - 1.0));
    rep.regime = to_string(params.regime());
    detail::finish(rep);
    return rep;
}

// (avg_{B_r} u^t)^{1/t} <= c inf_{B_{3r/2}} u + c (r/R)^{sp/(p-1)} Tail(u_-) + c chi
template <int N>
HarnackReport weak_harnack_check(const DiscreteFunction<N>& u, const std::vector<double>& f, const FracParams& params,
                                 const Point<N>& xi0, double r, double R, double t, const SphereRule<N>& rule) {
    params.validate();
    const auto& m = u.grid();
    if (!(r > 0.0) || 6.0 * r > R * (1.0 + 1e-12)) throw GeometryError("B_6r is not contained in B_R");
    detail::require_inside(m, xi0, R);
    detail::require_nonnegative(u, xi0, R);
    HarnackReport rep;
    rep.check = "weak_harnack";
    rep.params = params;
    rep.h = m.h;
    rep.r = r;
    rep.R = R;
    rep.t = t;
    rep.f_norm = detail::f_norm(u, f, xi0, R);
    rep.chi = chi_term(params, r, rep.f_norm, t);
    const auto b = ball_stats(u, xi0, r, {t});
    const auto b15 = ball_stats(u, xi0, 1.5 * r, {});
    rep.sup = b.sup;
    rep.inf = b15.inf;
    rep.lhs = b.means[0];
    rep.tail = tail(u, xi0, R, params, rule, Part::negative);
    rep.term_main = b15.inf;
    rep.term_tail = std::pow(r / R, params.s * params.p / (params.p - 1.0)) * rep.tail;
    rep.term_f = rep.chi;
    rep.regime = to_string(params.regime());
    detail::finish(rep);
    return rep;
}

struct BoundednessCheck {
    double delta = 1.0;
    double gamma = 0.0;
    double lhs = 0.0;             // sup_{B_{r/2}} u
    double tail_plus = 0.0;       // Tail(u_+; xi0, r/2)
    double mean_p = 0.0;          // (avg_{B_r} u_+^p)^{1/p}
    double c_min = 0.0;           // smallest c for this delta
    double c_used = 0.0;
    double rhs = 0.0;
    bool ok = false;
};

// sup_{B_{r/2}} u <= delta Tail(u_+; xi0, r/2) + c delta^{-gamma} (avg_{B_r} u_+^p)^{1/p}.
// With c unset the minimal c for this delta is used.
template <int N>
BoundednessCheck boundedness_check(const DiscreteFunction<N>& u, const FracParams& params, const Point<N>& xi0, double r,
                                   double delta, const SphereRule<N>& rule,
                                   std::optional<double> c = std::nullopt) {
    params.validate();
    if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("delta must lie in (0,1]");
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    detail::require_inside(u.grid(), xi0, r);
    BoundednessCheck out;
    out.delta = delta;
    out.gamma = boundedness_gamma(params);
    out.lhs = ball_stats(u, xi0, 0.5 * r, {}).sup;
    out.tail_plus = tail(u, xi0, 0.5 * r, params, rule, Part::positive);
    {
        const auto& m = u.grid();
        std::vector<double> w, v;
        for (std::size_t i : detail::ball_nodes(m, xi0, r, true)) {
            w.push_back(m.weights[i]);
            v.push_back(std::max(u.values[i], 0.0));
        }
        if (w.empty()) throw DomainError("ball contains no interior node");
        out.mean_p = detail::power_mean(w, v, params.p);
    }
    const double scale = std::pow(delta, -out.gamma) * out.mean_p;
    const double excess = out.lhs - delta * out.tail_plus;
    if (excess <= 0.0) out.c_min = 0.0;
    else out.c_min = scale > 0.0 ? excess / scale : std::numeric_limits<double>::infinity();
    out.c_used = c ? *c : out.c_min;
    out.rhs = delta * out.tail_plus + out.c_used * scale;
    out.ok = out.lhs <= out.rhs * (1.0 + 1e-12) + 1e-300;
    return out;
}

// C^infinity radial cutoff: 1 on [0, a], 0 on [b, inf).
struct Cutoff {
    double inner = 0.5;   // fractions of r
    double outer = 0.75;

    double operator()(double rho) const {
        if (rho <= inner) return 1.0;
        if (rho >= outer) return 0.0;
        auto f = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
        const double a = f(outer - rho), b = f(rho - inner);
        return a / (a + b);
    }
};

struct CaccioppoliCheck {
    double lhs = 0.0;
    double energy_term = 0.0;      // double sum of max(w)^p |phi(xi) - phi(eta)|^p
    double kernel_sup = 0.0;       // sup over supp phi of the kernel mass outside B_r
    double tail_factor = 0.0;      // d^{1-p} R^{-sp} Tail(u_-; xi0, R)^{p-1}
    double mass = 0.0;             // int w^p phi^p
    double load_term = 0.0;        // d^{1-q} r^Q ||f||
    double rhs_unit = 0.0;         // right side with c = 1
    double c_star = 0.0;           // lhs / rhs_unit
    double c_used = 0.0;
    double ratio = 0.0;            // lhs / (c_used rhs_unit)
};

template <int N>
CaccioppoliCheck caccioppoli_check(const DiscreteFunction<N>& u, const std::vector<double>& f, const FracParams& params,
                                   const Point<N>& xi0, double r, double R, double q, double d, const Cutoff& phi,
                                   const SphereRule<N>& rule, std::optional<double> c = std::nullopt, int threads = 1) {
    params.validate();
    const double p = params.p, sp = params.s * params.p, Q = params.Q();
    if (!(q > 1.0 && q < p)) throw DomainError("q must lie in (1,p)");
    if (!(d > 0.0)) throw DomainError("d must be positive");
    if (!(r > 0.0) || r > R * (1.0 + 1e-12)) throw GeometryError("B_r is not contained in B_R");
    if (!(phi.inner > 0.0 && phi.inner < phi.outer && phi.outer < 1.0)) throw DomainError("cutoff must satisfy 0 < a < b < 1");
    const auto& m = u.grid();
    detail::require_inside(m, xi0, R);
    detail::require_nonnegative(u, xi0, R);
    const auto idx = detail::ball_nodes(m, xi0, r, true);
    if (idx.empty()) throw DomainError("ball contains no interior node");
    const std::size_t K = idx.size();
    std::vector<double> w(K), ph(K);
    for (std::size_t a = 0; a < K; ++a) {
        w[a] = std::pow(u.values[idx[a]] + d, (p - q) / p);
        ph[a] = phi(koranyi_norm(increment(xi0, m.nodes[idx[a]])) / r);
    }
    std::vector<double> lrow(K), erow(K);
    parallel_for(K, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t a = b; a < e; ++a) {
            double sl = 0.0, se = 0.0;
            for (std::size_t c2 = a + 1; c2 < K; ++c2) {
                const double dist = koranyi_norm(increment(m.nodes[idx[c2]], m.nodes[idx[a]]));
                const double kern = m.weights[idx[a]] * m.weights[idx[c2]] * std::pow(dist, -Q - sp);
                sl += kern * std::pow(std::abs(w[a] * ph[a] - w[c2] * ph[c2]), p);
                se += kern * std::pow(std::max(w[a], w[c2]), p) * std::pow(std::abs(ph[a] - ph[c2]), p);
            }
            lrow[a] = 2.0 * sl;
            erow[a] = 2.0 * se;
        }
    });
    CaccioppoliCheck out;
    out.lhs = tree_sum(lrow);
    out.energy_term = tree_sum(erow);
    // sup over supp phi: the support nodes plus samples of its boundary sphere
    double ks = 0.0;
    for (std::size_t a = 0; a < K; ++a)
        if (ph[a] > 0.0)
            ks = std::max(ks, exterior_ray_integral(m.nodes[idx[a]], xi0, r, 0.0, sp, HomNorm{}, rule));
    const auto probe = sphere_rule<N>(64, mix_seed(0, kTagHarness));
    for (const auto& om : probe.nodes)
        ks = std::max(ks, exterior_ray_integral(group_mul(xi0, dilate(phi.outer * r, om)), xi0, r, 0.0, sp, HomNorm{}, rule));
    out.kernel_sup = ks;
    const double tail_minus = tail(u, xi0, R, params, rule, Part::negative);
    out.tail_factor = std::pow(d, 1.0 - p) * std::pow(R, -sp) * std::pow(tail_minus, p - 1.0);
    std::vector<double> mrow(K);
    for (std::size_t a = 0; a < K; ++a) mrow[a] = m.weights[idx[a]] * std::pow(w[a] * ph[a], p);
    out.mass = tree_sum(mrow);
    out.load_term = std::pow(d, 1.0 - q) * std::pow(r, Q) * detail::f_norm(u, f, xi0, R);
    out.rhs_unit = out.energy_term + (out.kernel_sup + out.tail_factor) * out.mass + out.load_term;
    out.c_star = out.rhs_unit > 0.0 ? out.lhs / out.rhs_unit : 0.0;
    out.c_used = c ? *c : out.c_star;
    out.ratio = out.rhs_unit > 0.0 && out.c_used > 0.0 ? out.lhs / (out.c_used * out.rhs_unit) : 0.0;
    return out;
}

// Weighted measure of { u >= k } over all mesh nodes in B_radius(xi0).
template <int N>
double level_set_measure(const DiscreteFunction<N>& u, const Point<N>& xi0, double radius, double k) {
    const auto& m = u.grid();
    std::vector<double> t;
    for (std::size_t i : detail::ball_nodes(m, xi0, radius, false))
        if (u.values[i] >= k) t.push_back(m.weights[i]);
    return tree_sum(t);
}

template <int N>
double ball_measure(const Mesh<N>& m, const Point<N>& xi0, double radius) {
    std::vector<double> t;
    for (std::size_t i : detail::ball_nodes(m, xi0, radius, false)) t.push_back(m.weights[i]);
    return tree_sum(t);
}

struct PositivityExpansion {
    double threshold = 0.0;        // 2 delta k - (1/2)(r/R)^{sp/(p-1)} Tail(u_-)
    double lhs_measure = 0.0;
    double ball_measure = 0.0;     // |B_6r|
    double c_bar = 0.0;            // measured constant
    double bound = 0.0;
    bool ok = false;
    double tail_term = 0.0;        // (r/R)^{sp/(p-1)} Tail(u_-)
    double inf_4r = 0.0;
    double delta_measured = 0.0;   // largest grid delta with inf_{B_4r} u >= delta k - tail_term
    double delta_formula = 0.0;    // the explicit exponential formula with c1 := 1
};

// Explicit delta of the level-set argument, evaluated with the measured c_bar
// and c1 := 1; sp >= Q uses q = p*_eps.
inline double delta_formula(const FracParams& prm, double c_bar, double sigma) {
    const double Q = prm.Q(), s = prm.s, p = prm.p, sp = s * p;
    double expo;
    if (prm.regime() == Regime::subcritical) {
        expo = c_bar * std::pow(2.0, (Q / p + s + 2.0) * Q * (Q - sp) / (p * s * s)) / sigma;
    } else {
        const double q = prm.p_star_eps();
        expo = c_bar * std::pow(2.0, (Q / p + s + 2.0) * q * p * p / ((q - p) * (q - p))) / sigma;
    }
    return 0.25 * std::exp(-expo);
}

template <int N>
PositivityExpansion positivity_expansion_check(const DiscreteFunction<N>& u, const std::vector<double>& f,
                                               const FracParams& params, const Point<N>& xi0, double r, double R,
                                               double k, double sigma, double delta, const SphereRule<N>& rule,
                                               std::optional<double> c_bar = std::nullopt) {
    params.validate();
    (void)f;
    if (!(delta > 0.0 && delta < 0.25)) throw DomainError("delta must lie in (0, 1/4)");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw DomainError("sigma must lie in (0,1]");
    if (!(r > 0.0) || 8.0 * r > R * (1.0 + 1e-12)) throw GeometryError("B_8r is not contained in B_R");
    const auto& m = u.grid();
    detail::require_inside(m, xi0, R);
    detail::require_nonnegative(u, xi0, R);
    PositivityExpansion out;
    out.ball_measure = ball_measure(m, xi0, 6.0 * r);
    if (!(out.ball_measure > 0.0)) throw DomainError("B_6r contains no node");
    if (level_set_measure(u, xi0, 6.0 * r, k) < sigma * out.ball_measure)
        throw DomainError("hypothesis", "level-set density hypothesis fails at (k, sigma)");
    out.tail_term = std::pow(r / R, params.s * params.p / (params.p - 1.0)) *
                    tail(u, xi0, R, params, rule, Part::negative);
    out.threshold = 2.0 * delta * k - 0.5 * out.tail_term;
    std::vector<double> t;
    for (std::size_t i : detail::ball_nodes(m, xi0, 6.0 * r, false))
        if (u.values[i] <= out.threshold) t.push_back(m.weights[i]);
    out.lhs_measure = tree_sum(t);
    const double L = std::log(1.0 / (2.0 * delta));
    const double measured = out.lhs_measure * sigma * L / out.ball_measure;
    out.c_bar = c_bar ? *c_bar : measured;
    out.bound = out.c_bar / (sigma * L) * out.ball_measure;
    out.ok = out.lhs_measure <= out.bound * (1.0 + 1e-12);
    out.inf_4r = ball_stats(u, xi0, 4.0 * r, {}).inf;
    for (int g = 1; g <= 249; ++g) {
        const double dg = g / 1000.0;
        if (out.inf_4r >= dg * k - out.tail_term) out.delta_measured = dg;
    }
    out.delta_formula = delta_formula(params, out.c_bar, sigma);
    return out;
}

struct TailControl {
    double lhs_tail = 0.0;   // Tail(u_+; xi0, r)
    double sup = 0.0;
    double term_tail = 0.0;
    double term_f = 0.0;
    double rhs_unit = 0.0;
    double c_star = 0.0;
};

template <int N>
TailControl tail_control_check(const DiscreteFunction<N>& u, const std::vector<double>& f, const FracParams& params,
                               const Point<N>& xi0, double r, double R, const SphereRule<N>& rule) {
    params.validate();
    if (!(r > 0.0 && r < R)) throw GeometryError("tail control needs 0 < r < R");
    detail::require_inside(u.grid(), xi0, R);
    detail::require_nonnegative(u, xi0, R);
    const double e = params.s * params.p / (params.p - 1.0);
    TailControl out;
    out.lhs_tail = tail(u, xi0, r, params, rule, Part::positive);
    out.sup = ball_stats(u, xi0, r, {}).sup;
    out.term_tail = std::pow(r / R, e) * tail(u, xi0, R, params, rule, Part::negative);
    out.term_f = std::pow(r, e) * std::pow(detail::f_norm(u, f, xi0, R), 1.0 / (params.p - 1.0));
    out.rhs_unit = std::max(out.sup, 0.0) + out.term_tail + out.term_f;
    if (out.rhs_unit > 0.0) out.c_star = out.lhs_tail / out.rhs_unit;
    else if (out.lhs_tail > 0.0) throw DomainError("unverifiable", "inequality unverifiable at this resolution");
    return out;
}

struct RobustnessRow {
    double s = 0.0;
    double tail = 0.0;                // Tail(u_-; xi0, R)
    double tail_coefficient = 0.0;    // (1-s)(r/R)^{2s}
    double weighted_tail = 0.0;
    double c_star_harnack = 0.0;
    double c_star_weak = 0.0;
    double sup = 0.0, inf = 0.0, t_mean = 0.0, inf_15 = 0.0;
};

// p = 2, f = 0 family: solve for each s and measure the Harnack constants
// with the (1-s)-weighted tail term.
template <int N>
std::vector<RobustnessRow> robustness_sweep(const std::function<Problem<N>(double)>& make_problem_for,
                                            const std::vector<double>& s_list, const Point<N>& xi0, double r, double R,
                                            double t, const SphereRule<N>& rule, const KernelOptions& kopt,
                                            const LinearOptions& lopt) {
    for (std::size_t k = 1; k < s_list.size(); ++k)
        if (!(s_list[k] > s_list[k - 1])) throw DomainError("s_list must be increasing");
    std::vector<RobustnessRow> rows;
    for (double s : s_list) {
        const Problem<N> P = make_problem_for(s);
        if (P.params.p != 2.0) throw DomainError("the robustness sweep needs p = 2");
        for (double v : P.f)
            if (v != 0.0) throw DomainError("the robustness sweep needs f = 0");
        const PairTable K = assemble_kernel(*P.mesh, P.params, kopt);
        const auto sol = solve_linear(P, K, lopt);
        if (!sol.converged) throw ConvergenceError("linear solve did not converge in the robustness sweep");
        const auto& u = sol.u;
        if (!(r > 0.0) || 6.0 * r > R * (1.0 + 1e-12)) throw GeometryError("B_6r is not contained in B_R");
        detail::require_inside(u.grid(), xi0, R);
        detail::require_nonnegative(u, xi0, R);
        RobustnessRow row;
        row.s = s;
        row.tail = tail(u, xi0, R, P.params, rule, Part::negative);
        row.tail_coefficient = (1.0 - s) * std::pow(r / R, 2.0 * s);
        row.weighted_tail = row.tail_coefficient * row.tail;
        const auto b = ball_stats(u, xi0, r, {t});
        const auto b15 = ball_stats(u, xi0, 1.5 * r, {});
        row.sup = b.sup;
        row.inf = b.inf;
        row.t_mean = b.means[0];
        row.inf_15 = b15.inf;
        auto ratio = [](double lhs, double rhs) {
            if (rhs > 0.0) return lhs / rhs;
            if (lhs > 0.0) throw DomainError("unverifiable", "inequality unverifiable at this resolution");
            return 0.0;
        };
        row.c_star_harnack = ratio(b.sup, b.inf + row.weighted_tail);
        row.c_star_weak = ratio(b.means[0], b15.inf + row.weighted_tail);
        rows.push_back(row);
    }
    return rows;
}

} // namespace hfrac
