#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "group.hpp"

namespace hfrac {

// Quadrature on the Koranyi unit sphere for d eta = r^{Q-1} dr d sigma.
// Points are z = sqrt(cos phi) theta, t = sin phi with theta in S^{2N-1} and
// phi in (-pi/2, pi/2); in these coordinates d sigma = cos^{N-1}(phi) dphi dtheta.
template <int N>
struct SphereRule {
    std::vector<Point<N>> nodes;
    double weight = 0.0;   // common weight sigma(dB_1) / M
    double total = 0.0;

    std::size_t size() const { return nodes.size(); }
};

template <int N>
Point<N> sphere_point(double phi, const std::array<double, 2 * N>& theta) {
    Point<N> p;
    const double a = std::sqrt(std::cos(phi));
    for (int k = 0; k < 2 * N; ++k) p[k] = a * theta[k];
    p.t = std::sin(phi);
    return p;
}

// Monte-Carlo rule with M directions. For N = 1 the phi coordinate is
// stratified (its density is flat there).
template <int N>
SphereRule<N> sphere_rule(std::size_t M, std::uint64_t seed) {
    if (M == 0) throw DomainError("angular sample count must be positive");
    Rng rng(seed);
    SphereRule<N> rule;
    rule.total = koranyi_sphere_measure(N);
    rule.weight = rule.total / static_cast<double>(M);
    rule.nodes.reserve(M);
    const double pi = std::numbers::pi;
    for (std::size_t k = 0; k < M; ++k) {
        double phi;
        if constexpr (N == 1) {
            phi = -0.5 * pi + pi * (static_cast<double>(k) + rng.uniform()) / static_cast<double>(M);
        } else {
            do {
                phi = rng.uniform(-0.5 * pi, 0.5 * pi);
            } while (rng.uniform() > std::pow(std::cos(phi), N - 1));
        }
        std::array<double, 2 * N> theta{};
        if constexpr (N == 1) {
            const double a = 2.0 * pi * rng.uniform();
            theta = {std::cos(a), std::sin(a)};
        } else {
            double nrm = 0.0;
            for (auto& c : theta) {
                c = rng.normal();
                nrm += c * c;
            }
            nrm = std::sqrt(nrm);
            for (auto& c : theta) c /= nrm;
        }
        rule.nodes.push_back(sphere_point<N>(phi, theta));
    }
    return rule;
}

// Composite 4-point Gauss-Legendre in log r. Weights integrate g against
// dr / r, so int_a^b f(r) dr = sum w_k r_k f(r_k).
struct RadialRule {
    std::vector<double> r;
    std::vector<double> w;
};

inline RadialRule log_radial_rule(double r0, double r1, int nodes_per_decade) {
    if (!(r0 > 0.0) || !(r1 > r0)) throw DomainError("radial rule needs 0 < r0 < r1");
    if (nodes_per_decade < 4) throw DomainError("need at least 4 radial nodes per decade");
    static constexpr double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                     0.8611363115940526};
    static constexpr double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                     0.3478548451374538};
    const double L0 = std::log(r0), L1 = std::log(r1);
    const double decades = (L1 - L0) / std::log(10.0);
    const int panels = std::max(1, static_cast<int>(std::ceil(decades * nodes_per_decade / 4.0)));
    const double hp = (L1 - L0) / panels;
    RadialRule R;
    R.r.reserve(4 * panels);
    R.w.reserve(4 * panels);
    for (int p = 0; p < panels; ++p) {
        const double mid = L0 + (p + 0.5) * hp;
        for (int q = 0; q < 4; ++q) {
            R.r.push_back(std::exp(mid + 0.5 * hp * gx[q]));
            R.w.push_back(0.5 * hp * gw[q]);
        }
    }
    return R;
}

// int over { zeta : |zeta| >= r_min, origin o zeta outside B_Rb(c) } of
// d_o(zeta)^{-(Q+a)} d zeta, a > 0, ray by ray. Along a ray the kernel is
// r^{-1-a} d_o(omega)^{-Q-a}, so every outside segment integrates exactly; the
// segments are located by a scan plus bisection on the band where the ray
// can cross the sphere (by the triangle inequality for the Koranyi gauge).
template <int N>
double exterior_ray_integral(const Point<N>& origin, const Point<N>& c, double Rb, double r_min, double a,
                             const HomNorm& norm, const SphereRule<N>& rule, int scan = 24) {
    if (!(a > 0.0)) throw DomainError("kernel excess exponent must be positive");
    const Point<N> w = increment(c, origin);
    const double dist = koranyi_norm(w);
    if (r_min <= 0.0 && dist >= Rb)
        throw DomainError("exterior integral diverges: origin outside the truncation ball");
    const double Q = homogeneous_dimension(N);
    const double lo = std::max(r_min, std::max(0.0, Rb - dist));
    const double hi = Rb + dist;
    auto prim = [a](double r) { return std::pow(r, -a) / a; };   // int_r^inf r^{-1-a}

    double total = 0.0;
    for (const auto& om : rule.nodes) {
        const double kern = norm.kind == NormKind::koranyi ? 1.0 : std::pow(norm(om), -Q - a);
        double ray = 0.0;
        if (r_min >= hi) {
            ray = prim(r_min);
        } else {
            auto outside = [&](double r) { return koranyi_norm(group_mul(w, dilate(r, om))) >= Rb; };
            // r in (lo, hi): scan, bisect each crossing, add outside pieces.
            double r_prev = lo, r_last = lo;
            bool out_prev = lo > 0.0 ? outside(lo) : false;
            for (int k = 1; k <= scan; ++k) {
                const double r_k = lo + (hi - lo) * k / scan;
                const bool out_k = outside(r_k);
                if (out_k != out_prev) {
                    double a0 = r_last, b0 = r_k;
                    for (int it = 0; it < 48; ++it) {
                        const double m = 0.5 * (a0 + b0);
                        (outside(m) == out_prev ? a0 : b0) = m;
                    }
                    const double rc = 0.5 * (a0 + b0);
                    if (out_prev) ray += prim(r_prev) - prim(rc);
                    r_prev = rc;
                    out_prev = out_k;
                }
                if (k == scan && out_prev) ray += prim(r_prev) - prim(r_k);
                r_last = r_k;
            }
            ray += prim(hi);
        }
        total += kern * ray;
    }
    return total * rule.weight;
}

} // namespace hfrac
