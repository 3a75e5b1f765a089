#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "mesh.hpp"
#include "nonlocal.hpp"
#include "parallel.hpp"

namespace hfrac {

enum class Part { whole, positive, negative };

inline double take_part(double v, Part part) {
    switch (part) {
    case Part::positive: return std::max(v, 0.0);
    case Part::negative: return std::max(-v, 0.0);
    default: return v;
    }
}

// Tail of a mesh function: node sum over the mesh outside B_R(xi0) plus the
// constant far value over H \ B_{R_ext}(center), integrated along rays.
template <int N>
double tail(const DiscreteFunction<N>& u, const Point<N>& xi0, double R, const FracParams& params,
            const SphereRule<N>& rule, Part part = Part::whole) {
    params.validate();
    if (!(R > 0.0)) throw DomainError("tail radius must be positive");
    const auto& m = u.grid();
    const double sp = params.s * params.p, q = params.p - 1.0, Q = params.Q();
    std::vector<double> terms;
    terms.reserve(m.size() + 1);
    for (std::size_t j = 0; j < m.size(); ++j) {
        const double d = koranyi_norm(increment(xi0, m.nodes[j]));
        if (d < R) continue;
        const double v = std::abs(take_part(u.values[j], part));
        if (v == 0.0) continue;
        terms.push_back(m.weights[j] * std::pow(v, q) * std::pow(d, -Q - sp));
    }
    const double fv = std::abs(take_part(u.far_value, part));
    if (fv > 0.0)
        terms.push_back(std::pow(fv, q) *
                        exterior_ray_integral(xi0, m.center, m.R_ext, R, sp, HomNorm{}, rule));
    const double J = std::pow(R, sp) * tree_sum(terms);
    return J > 0.0 ? std::pow(J, 1.0 / q) : 0.0;
}

// [u]_{W^{s,p}} over all mesh node pairs, diagonal excluded.
template <int N>
double gagliardo_seminorm(const DiscreteFunction<N>& u, const FracParams& params, int threads = 1) {
    params.validate();
    const auto& m = u.grid();
    const double sp = params.s * params.p, p = params.p, Q = params.Q();
    std::vector<double> row(m.size());
    parallel_for(m.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            double s = 0.0;
            for (std::size_t j = i + 1; j < m.size(); ++j) {
                const double du = u.values[i] - u.values[j];
                if (du == 0.0) continue;
                const double d = koranyi_norm(increment(m.nodes[j], m.nodes[i]));
                s += m.weights[j] * std::pow(std::abs(du), p) * std::pow(d, -Q - sp);
            }
            row[i] = 2.0 * m.weights[i] * s;
        }
    });
    return std::pow(tree_sum(row), 1.0 / p);
}

struct SobolevCheck {
    double lhs = 0.0;            // ||u||_{L^{p*}}^p
    double rhs_seminorm = 0.0;   // [u]^p
    double ratio = std::numeric_limits<double>::quiet_NaN();
    bool degenerate = false;
};

template <int N>
SobolevCheck sobolev_check(const DiscreteFunction<N>& u, const FracParams& params, int threads = 1) {
    if (params.regime() != Regime::subcritical) throw DomainError("the Sobolev check needs sp < Q");
    if (u.far_value != 0.0) throw DomainError("the Sobolev check needs u compactly supported on the mesh");
    const double ps = params.p_star(), p = params.p;
    const auto& m = u.grid();
    std::vector<double> t(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) t[i] = m.weights[i] * std::pow(std::abs(u.values[i]), ps);
    SobolevCheck out;
    out.lhs = std::pow(tree_sum(t), p / ps);
    out.rhs_seminorm = std::pow(gagliardo_seminorm(u, params, threads), p);
    out.degenerate = !(out.rhs_seminorm > 0.0);
    if (!out.degenerate) out.ratio = out.lhs / out.rhs_seminorm;
    return out;
}

} // namespace hfrac
