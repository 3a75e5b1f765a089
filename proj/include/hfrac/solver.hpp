#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "mesh.hpp"
#include "nonlocal.hpp"
#include "parallel.hpp"

namespace hfrac {

template <int N>
struct Problem {
    FracParams params;
    std::shared_ptr<const Mesh<N>> mesh;
    std::vector<double> f;         // interior nodes
    std::vector<double> g;         // exterior nodes
    double g_far = 0.0;            // g beyond B_{R_ext}
    std::vector<double> initial;   // interior start values (g extended inside)

    void validate() const {
        params.validate();
        if (params.n != N) throw DomainError("params.n does not match the mesh dimension");
        if (!mesh) throw DomainError("problem has no mesh");
        if (f.size() != mesh->n_interior || initial.size() != mesh->n_interior)
            throw DomainError("interior data size mismatch");
        if (g.size() != mesh->n_exterior()) throw DomainError("exterior data size mismatch");
        for (double v : f)
            if (!std::isfinite(v)) throw DomainError("f must be finite");
        for (double v : g)
            if (!std::isfinite(v)) throw DomainError("g must be finite");
        if (!std::isfinite(g_far)) throw DomainError("g_far must be finite");
    }
};

template <int N, typename F, typename G>
Problem<N> make_problem(const FracParams& params, std::shared_ptr<const Mesh<N>> mesh, const F& f, const G& g,
                        double g_far) {
    Problem<N> P{params, mesh, {}, {}, g_far, {}};
    for (std::size_t i = 0; i < mesh->size(); ++i) {
        const auto& x = mesh->nodes[i];
        if (mesh->is_interior(i)) {
            P.f.push_back(f(x));
            P.initial.push_back(g(x));
        } else {
            P.g.push_back(g(x));
        }
    }
    P.validate();
    return P;
}

struct KernelOptions {
    std::size_t angular_samples = 1024;   // rays for the beyond-truncation mass
    std::uint64_t seed = 20240611;
    int threads = 1;
};

// K_ij = w_i w_j d_o(xi_j^{-1} o xi_i)^{-Q-sp} split into interior x interior
// and interior x exterior blocks, plus far_i = w_i int_{H \ B_{R_ext}} d_o^{-Q-sp}.
struct PairTable {
    std::size_t n_int = 0, n_ext = 0;
    std::vector<double> ii;
    std::vector<double> ie;
    std::vector<double> far;
    std::vector<double> row_total;   // sum_j K_ij over all nodes, plus far_i

    double interior(std::size_t i, std::size_t j) const { return ii[i * n_int + j]; }
    double exterior(std::size_t i, std::size_t e) const { return ie[i * n_ext + e]; }
};

template <int N>
double pair_weight(const Mesh<N>& mesh, const FracParams& params, std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    const double d = pseudo_dist(params.norm, mesh.nodes[i], mesh.nodes[j]);
    if (d == 0.0) throw DomainError("duplicate mesh nodes");
    return mesh.weights[i] * mesh.weights[j] * std::pow(d, -(params.Q() + params.s * params.p));
}

template <int N>
PairTable assemble_kernel(const Mesh<N>& mesh, const FracParams& params, const KernelOptions& opt = {}) {
    params.validate();
    PairTable K;
    K.n_int = mesh.n_interior;
    K.n_ext = mesh.n_exterior();
    const std::size_t ni = K.n_int, ne = K.n_ext;
    K.ii.assign(ni * ni, 0.0);
    K.ie.assign(ni * ne, 0.0);
    K.far.assign(ni, 0.0);
    K.row_total.assign(ni, 0.0);
    const auto rule = sphere_rule<N>(opt.angular_samples, mix_seed(opt.seed, kTagMesh));
    const double sp = params.s * params.p;
    parallel_for(ni, opt.threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            for (std::size_t j = i + 1; j < ni; ++j) K.ii[i * ni + j] = pair_weight(mesh, params, i, j);
            for (std::size_t k = 0; k < ne; ++k) K.ie[i * ne + k] = pair_weight(mesh, params, i, ni + k);
            K.far[i] = mesh.weights[i] *
                       exterior_ray_integral(mesh.nodes[i], mesh.center, mesh.R_ext, 0.0, sp, params.norm, rule);
        }
    });
    for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = i + 1; j < ni; ++j) K.ii[j * ni + i] = K.ii[i * ni + j];
    for (std::size_t i = 0; i < ni; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < ni; ++j) s += K.ii[i * ni + j];
        for (std::size_t k = 0; k < ne; ++k) s += K.ie[i * ne + k];
        K.row_total[i] = s + K.far[i];
    }
    return K;
}

template <int N>
struct DiscreteSolution {
    DiscreteFunction<N> u;        // interior values first, exterior values = g
    double energy = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool m_matrix = true;         // set by the linear solver
    std::vector<double> energy_log;

    std::size_t n_interior() const { return u.mesh->n_interior; }
    std::span<const double> interior() const { return {u.values.data(), n_interior()}; }
};

namespace detail {

template <int N>
DiscreteSolution<N> wrap(const Problem<N>& P, std::vector<double> interior) {
    DiscreteSolution<N> S;
    S.u.mesh = P.mesh;
    S.u.values = std::move(interior);
    S.u.values.insert(S.u.values.end(), P.g.begin(), P.g.end());
    S.u.far_value = P.g_far;
    return S;
}

} // namespace detail

// E(u) = (1/2p) sum_{i != j} K_ij |u_i - u_j|^p - sum w_i f_i u_i, over
// interior-interior and interior-exterior pairs and the beyond-truncation
// shell; the exterior-exterior part is a constant and is left out.
template <int N>
double energy(std::span<const double> u, const Problem<N>& P, const PairTable& K, int threads = 1) {
    const std::size_t ni = K.n_int, ne = K.n_ext;
    const double p = P.params.p;
    std::vector<double> row(ni);
    parallel_for(ni, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            double s = 0.0;
            const double* Ki = &K.ii[i * ni];
            for (std::size_t j = i + 1; j < ni; ++j) s += Ki[j] * std::pow(std::abs(u[i] - u[j]), p);
            const double* Ke = &K.ie[i * ne];
            for (std::size_t k = 0; k < ne; ++k) s += Ke[k] * std::pow(std::abs(u[i] - P.g[k]), p);
            s += K.far[i] * std::pow(std::abs(u[i] - P.g_far), p);
            row[i] = s / p - P.mesh->weights[i] * P.f[i] * u[i];
        }
    });
    return tree_sum(row);
}

template <int N>
std::vector<double> energy_gradient(std::span<const double> u, const Problem<N>& P, const PairTable& K,
                                    int threads = 1) {
    const std::size_t ni = K.n_int, ne = K.n_ext;
    const double p = P.params.p;
    std::vector<double> g(ni);
    parallel_for(ni, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            double s = 0.0;
            const double* Ki = &K.ii[i * ni];
            for (std::size_t j = 0; j < ni; ++j) s += Ki[j] * detail::phi_p(u[i] - u[j], p);
            const double* Ke = &K.ie[i * ne];
            for (std::size_t k = 0; k < ne; ++k) s += Ke[k] * detail::phi_p(u[i] - P.g[k], p);
            s += K.far[i] * detail::phi_p(u[i] - P.g_far, p);
            g[i] = s - P.mesh->weights[i] * P.f[i];
        }
    });
    return g;
}

// Largest violation of the discrete weak identity over interior hat
// functions, normalized by the node weight (so it reads as L_h u - f).
template <int N>
double residual_check(std::span<const double> u, const Problem<N>& P, const PairTable& K, int threads = 1) {
    const auto g = energy_gradient(u, P, K, threads);
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, std::abs(g[i]) / P.mesh->weights[i]);
    return m;
}

struct LinearOptions {
    double rel_tol = 1e-12;
    int max_iter = 0;   // 0: 10 n + 100
    int threads = 1;
};

// p = 2: (A u)_i = row_total_i u_i - sum_j K_ij u_j = sum_ext K_ie g_e + far_i g_far + w_i f_i,
// solved by Jacobi-preconditioned conjugate gradients.
template <int N>
DiscreteSolution<N> solve_linear(const Problem<N>& P, const PairTable& K, const LinearOptions& opt = {}) {
    P.validate();
    if (P.params.p != 2.0) throw DomainError("solve_linear needs p = 2");
    const std::size_t ni = K.n_int, ne = K.n_ext;
    std::vector<double> rhs(ni);
    bool m_matrix = true;
    for (std::size_t i = 0; i < ni; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < ne; ++k) s += K.ie[i * ne + k] * P.g[k];
        rhs[i] = s + K.far[i] * P.g_far + P.mesh->weights[i] * P.f[i];
        double off = 0.0;
        for (std::size_t j = 0; j < ni; ++j) {
            const double kij = K.ii[i * ni + j];
            if (!(kij >= 0.0)) m_matrix = false;
            off += kij;
        }
        if (!(K.row_total[i] >= off) || !(K.far[i] >= 0.0)) m_matrix = false;
    }
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        parallel_for(ni, opt.threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                double s = 0.0;
                const double* Ki = &K.ii[i * ni];
                for (std::size_t j = 0; j < ni; ++j) s += Ki[j] * x[j];
                y[i] = K.row_total[i] * x[i] - s;
            }
        });
    };
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> t(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] * b[i];
        return tree_sum(t);
    };
    std::vector<double> x = P.initial, r(ni), z(ni), d(ni), Ad(ni);
    apply(x, Ad);
    for (std::size_t i = 0; i < ni; ++i) r[i] = rhs[i] - Ad[i];
    const double bnorm = std::sqrt(dot(rhs, rhs));
    const double target = opt.rel_tol * (bnorm > 0.0 ? bnorm : 1.0);
    const int max_iter = opt.max_iter > 0 ? opt.max_iter : static_cast<int>(10 * ni + 100);
    for (std::size_t i = 0; i < ni; ++i) z[i] = r[i] / K.row_total[i];
    d = z;
    double rz = dot(r, z), rn = std::sqrt(dot(r, r));
    std::vector<double> best = x;
    double best_rn = rn;
    int it = 0;
    while (rn > target && it < max_iter) {
        apply(d, Ad);
        const double dAd = dot(d, Ad);
        if (!(dAd > 0.0)) break;
        const double alpha = rz / dAd;
        for (std::size_t i = 0; i < ni; ++i) {
            x[i] += alpha * d[i];
            r[i] -= alpha * Ad[i];
        }
        for (std::size_t i = 0; i < ni; ++i) z[i] = r[i] / K.row_total[i];
        const double rz_new = dot(r, z);
        for (std::size_t i = 0; i < ni; ++i) d[i] = z[i] + (rz_new / rz) * d[i];
        rz = rz_new;
        rn = std::sqrt(dot(r, r));
        ++it;
        if (rn < best_rn) {
            best_rn = rn;
            best = x;
        }
    }
    const bool ok = rn <= target;
    auto S = detail::wrap(P, ok ? x : best);
    S.iterations = it;
    S.converged = ok;
    S.m_matrix = m_matrix;
    S.energy = energy<N>(S.interior(), P, K, opt.threads);
    S.residual = residual_check<N>(S.interior(), P, K, opt.threads);
    S.energy_log.push_back(S.energy);
    return S;
}

struct NonlinearOptions {
    double tol = 1e-8;             // sup_i |dE/du_i| / w_i
    int max_iter = 100000;
    int stall_iterations = 3;      // consecutive relative decreases below 1e-12
    int threads = 1;
    std::vector<double> initial;   // overrides the problem's start values when set
};

// Minimizes E with Jacobi-preconditioned nonlinear conjugate gradients
// (Polak-Ribiere+). Each step brackets the root of the convex directional
// derivative, then backtracks until the Armijo condition holds.
template <int N>
DiscreteSolution<N> solve_nonlinear(const Problem<N>& P, const PairTable& K, const NonlinearOptions& opt = {}) {
    P.validate();
    const std::size_t ni = K.n_int;
    const int T = opt.threads;
    std::vector<double> u = opt.initial.empty() ? P.initial : opt.initial;
    if (u.size() != ni) throw DomainError("initial guess size mismatch");
    auto E = [&](const std::vector<double>& v) { return energy<N>(v, P, K, T); };
    auto G = [&](const std::vector<double>& v) { return energy_gradient<N>(v, P, K, T); };
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> t(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) t[i] = a[i] * b[i];
        return tree_sum(t);
    };
    auto sup_res = [&](const std::vector<double>& g) {
        double m = 0.0;
        for (std::size_t i = 0; i < ni; ++i) m = std::max(m, std::abs(g[i]) / P.mesh->weights[i]);
        return m;
    };
    auto shifted = [&](double a, const std::vector<double>& d) {
        std::vector<double> v(ni);
        for (std::size_t i = 0; i < ni; ++i) v[i] = u[i] + a * d[i];
        return v;
    };

    double e = E(u);
    std::vector<double> g = G(u), z(ni), d(ni);
    for (std::size_t i = 0; i < ni; ++i) z[i] = g[i] / K.row_total[i];
    for (std::size_t i = 0; i < ni; ++i) d[i] = -z[i];
    double gz = dot(g, z);
    DiscreteSolution<N> S;
    S.energy_log.push_back(e);
    int it = 0, stall = 0;
    double alpha_prev = 1.0;
    bool ok = sup_res(g) < opt.tol;
    while (!ok && it < opt.max_iter) {
        double gd = dot(g, d);
        if (!(gd < 0.0)) {   // lost descent: restart along -z
            for (std::size_t i = 0; i < ni; ++i) d[i] = -z[i];
            gd = -gz;
            if (!(gd < 0.0)) break;
        }
        auto slope = [&](double a) { return dot(G(shifted(a, d)), d); };
        // bracket [lo, hi] with slope(lo) < 0 <= slope(hi)
        double lo = 0.0, slo = gd, hi = alpha_prev, shi = slope(hi);
        for (int k = 0; shi < 0.0 && k < 60; ++k) {
            lo = hi;
            slo = shi;
            hi *= 4.0;
            shi = slope(hi);
        }
        double a = hi;
        for (int k = 0; k < 40 && shi >= 0.0; ++k) {
            a = hi - shi * (hi - lo) / (shi - slo);
            if (!(a > lo && a < hi)) a = 0.5 * (lo + hi);
            const double sa = slope(a);
            if (std::abs(sa) <= 0.1 * std::abs(gd)) break;
            (sa < 0.0 ? (lo = a, slo = sa) : (hi = a, shi = sa));
        }
        double e_new = E(shifted(a, d));
        for (int k = 0; k < 60 && e_new > e + 1e-4 * a * gd && e_new - e > 1e-14 * std::abs(e); ++k) {
            a *= 0.5;
            e_new = E(shifted(a, d));
        }
        if (!(e_new <= e)) {   // no representable decrease along d
            a = 0.0;
            e_new = e;
        }
        u = shifted(a, d);
        alpha_prev = a;
        const auto g_new = G(u);
        std::vector<double> z_new(ni);
        for (std::size_t i = 0; i < ni; ++i) z_new[i] = g_new[i] / K.row_total[i];
        double num = 0.0;
        {
            std::vector<double> t(ni);
            for (std::size_t i = 0; i < ni; ++i) t[i] = (g_new[i] - g[i]) * z_new[i];
            num = tree_sum(t);
        }
        const double beta = std::max(0.0, num / gz);
        for (std::size_t i = 0; i < ni; ++i) d[i] = -z_new[i] + beta * d[i];
        const double rel = (e - e_new) / std::max(std::abs(e), std::numeric_limits<double>::min());
        stall = rel < 1e-12 ? stall + 1 : 0;
        g = g_new;
        z = std::move(z_new);
        gz = dot(g, z);
        e = e_new;
        S.energy_log.push_back(e);
        ++it;
        ok = sup_res(g) < opt.tol;
        if (stall >= opt.stall_iterations) break;
    }
    auto out = detail::wrap(P, u);
    out.energy_log = std::move(S.energy_log);
    out.iterations = it;
    out.converged = ok || stall >= opt.stall_iterations;
    out.energy = E(u);
    out.residual = sup_res(g);
    return out;
}

} // namespace hfrac
