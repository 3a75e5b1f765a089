#pragma once

#include <cmath>
#include <vector>

#include "error.hpp"

namespace hfrac {

struct GeometricIteration {
    bool hypothesis_ok = false;   // recursion holds and A_0 is below the threshold
    double threshold = 0.0;       // c0^{-1/beta} b^{-1/beta^2}
    std::vector<double> bounds;   // b^{-j/beta} A_0
    bool bounds_hold = false;     // A_j <= bounds_j termwise (checked only under the hypothesis)
    bool limit_zero = false;
};

// If A_{j+1} <= c0 b^j A_j^{1+beta} and A_0 <= threshold, then A_j <= b^{-j/beta} A_0.
inline GeometricIteration iter_lemma_geometric(double c0, double b, double beta, const std::vector<double>& A,
                                               double rel_tol = 1e-12) {
    if (!(c0 > 0.0) || !(b > 1.0) || !(beta > 0.0)) throw DomainError("need c0 > 0, b > 1, beta > 0");
    for (double a : A)
        if (!(a >= 0.0)) throw DomainError("sequence must be nonnegative");
    GeometricIteration out;
    out.threshold = std::pow(c0, -1.0 / beta) * std::pow(b, -1.0 / (beta * beta));
    bool rec = true;
    for (std::size_t j = 0; j + 1 < A.size(); ++j) {
        const double rhs = c0 * std::pow(b, static_cast<double>(j)) * std::pow(A[j], 1.0 + beta);
        if (A[j + 1] > rhs * (1.0 + rel_tol)) rec = false;
    }
    const bool start = A.empty() || A[0] <= out.threshold * (1.0 + rel_tol);
    out.hypothesis_ok = rec && start;
    if (!out.hypothesis_ok) return out;
    out.bounds_hold = true;
    for (std::size_t j = 0; j < A.size(); ++j) {
        const double bound = std::pow(b, -static_cast<double>(j) / beta) * A[0];
        out.bounds.push_back(bound);
        if (A[j] > bound * (1.0 + rel_tol) + 0.0) out.bounds_hold = false;
    }
    out.limit_zero = true;   // b > 1 forces b^{-j/beta} -> 0
    return out;
}

struct InterpolationIteration {
    bool premise_ok = false;
    bool rho_bound_ok = false;
    double c = 0.0;   // constant of the conclusion
};

// Constant of the conclusion: iterate on t_{i+1} - t_i = (1-l) l^i (R - rho)
// with zeta l^{-theta} < 1; zeta = 0 is the direct bound with c = 1.
inline double interpolation_constant(double theta, double zeta) {
    if (!(theta >= 0.0) || !(zeta >= 0.0 && zeta < 1.0)) throw DomainError("need theta >= 0 and zeta in [0,1)");
    if (zeta == 0.0) return 1.0;
    if (theta == 0.0) return 1.0 / (1.0 - zeta);
    const double lam = std::pow(0.5 * (1.0 + zeta), 1.0 / theta);
    const double geo = 1.0 / (1.0 - zeta * std::pow(lam, -theta));
    return std::max(std::pow(1.0 - lam, -theta) * geo, 1.0 / (1.0 - zeta));
}

// g sampled at increasing points ts: premise on every sampled pair t < tau,
// conclusion g(rho) <= c (c1 (R - rho)^{-theta} + c2) on every pair rho < R.
inline InterpolationIteration iter_lemma_interpolation(const std::vector<double>& ts, const std::vector<double>& g,
                                                       double c1, double c2, double theta, double zeta,
                                                       double rel_tol = 1e-12) {
    if (ts.size() != g.size() || ts.size() < 2) throw DomainError("need at least two samples of g");
    for (std::size_t k = 1; k < ts.size(); ++k)
        if (!(ts[k] > ts[k - 1])) throw DomainError("sample points must increase");
    for (double v : g)
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("g must be nonnegative and bounded");
    if (!(c1 >= 0.0 && c2 >= 0.0)) throw DomainError("c1, c2 must be nonnegative");
    InterpolationIteration out;
    out.c = interpolation_constant(theta, zeta);
    out.premise_ok = true;
    out.rho_bound_ok = true;
    for (std::size_t a = 0; a < ts.size(); ++a)
        for (std::size_t b = a + 1; b < ts.size(); ++b) {
            const double gap = std::pow(ts[b] - ts[a], -theta);
            const double prem = c1 * gap + c2 + zeta * g[b];
            if (g[a] > prem * (1.0 + rel_tol)) out.premise_ok = false;
            const double concl = out.c * (c1 * gap + c2);
            if (g[a] > concl * (1.0 + rel_tol)) out.rho_bound_ok = false;
        }
    return out;
}

} // namespace hfrac
