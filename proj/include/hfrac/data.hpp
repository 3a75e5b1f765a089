#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "calculus.hpp"
#include "error.hpp"

namespace hfrac {

// Named test functions. Everything is expressed in the translated
// coordinates (z', t') = center^{-1} o xi.
struct DataSpec {
    std::string kind = "constant";   // constant | gaussian-bump | sign-flip-shell | polynomial-cutoff | bump
    double value = 0.0;              // constant
    double amplitude = 1.0;          // gaussian-bump
    double width = 0.2;              // gaussian-bump, sign-flip-shell
    std::vector<double> center;      // 2n+1 coordinates, empty = origin
    double a = 1.0;                  // sign-flip-shell: positive amplitude; bump, polynomial-cutoff: z radius
    double b = 0.5;                  // sign-flip-shell: negative amplitude; bump: t half-height
    double r1 = 1.1, r2 = 1.3;       // sign-flip-shell radii
    std::array<double, 4> coeffs{1.0, 0.0, 0.0, 0.0};   // polynomial-cutoff: c0 + c1 x1 + c2 |z|^2 + c3 t
};

inline const std::vector<std::string>& data_kinds() {
    static const std::vector<std::string> k{"constant", "gaussian-bump", "sign-flip-shell", "polynomial-cutoff", "bump"};
    return k;
}

namespace detail {

template <int N>
struct Local {
    Point<N> w;                                               // center^{-1} o xi
    std::array<std::array<double, 2 * N + 1>, 2 * N + 1> J;   // d w / d xi
};

template <int N>
Local<N> localize(const Point<N>& c, const Point<N>& xi) {
    constexpr int D = 2 * N + 1;
    Local<N> L;
    L.w = increment(c, xi);
    for (auto& row : L.J) row.fill(0.0);
    for (int k = 0; k < D; ++k) L.J[k][k] = 1.0;
    for (int j = 0; j < N; ++j) {
        L.J[2 * N][j] = -2.0 * c.y[j];
        L.J[2 * N][N + j] = 2.0 * c.x[j];
    }
    return L;
}

// Pull partials in w back to xi through the constant Jacobian.
template <int N>
typename SmoothFunction<N>::Gradient pull_gradient(const Local<N>& L, const typename SmoothFunction<N>::Gradient& g) {
    constexpr int D = 2 * N + 1;
    typename SmoothFunction<N>::Gradient out{};
    for (int a = 0; a < D; ++a)
        for (int k = 0; k < D; ++k) out[a] += L.J[k][a] * g[k];
    return out;
}

template <int N>
typename SmoothFunction<N>::Hessian pull_hessian(const Local<N>& L, const typename SmoothFunction<N>::Hessian& H) {
    constexpr int D = 2 * N + 1;
    typename SmoothFunction<N>::Hessian tmp{}, out{};
    for (int k = 0; k < D; ++k)
        for (int b = 0; b < D; ++b)
            for (int l = 0; l < D; ++l) tmp[k][b] += H[k][l] * L.J[l][b];
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b)
            for (int k = 0; k < D; ++k) out[a][b] += L.J[k][a] * tmp[k][b];
    return out;
}

// (1 - |z|^2/a^2 - t^2/b^2)_+^4 with partials, in local coordinates.
template <int N>
struct Bump4 {
    double a, b;

    double v(const Point<N>& w) const { return 1.0 - w.z_norm2() / (a * a) - w.t * w.t / (b * b); }
    double value(const Point<N>& w) const {
        const double q = v(w);
        return q > 0.0 ? q * q * q * q : 0.0;
    }
    typename SmoothFunction<N>::Gradient dv(const Point<N>& w) const {
        typename SmoothFunction<N>::Gradient g{};
        for (int k = 0; k < 2 * N; ++k) g[k] = -2.0 * w[k] / (a * a);
        g[2 * N] = -2.0 * w.t / (b * b);
        return g;
    }
    typename SmoothFunction<N>::Gradient gradient(const Point<N>& w) const {
        const double q = v(w);
        auto g = dv(w);
        for (auto& e : g) e = q > 0.0 ? 4.0 * q * q * q * e : 0.0;
        return g;
    }
    typename SmoothFunction<N>::Hessian hessian(const Point<N>& w) const {
        constexpr int D = 2 * N + 1;
        typename SmoothFunction<N>::Hessian H{};
        const double q = v(w);
        if (q <= 0.0) return H;
        const auto g = dv(w);
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) H[i][j] = 12.0 * q * q * g[i] * g[j];
        for (int k = 0; k < 2 * N; ++k) H[k][k] += 4.0 * q * q * q * (-2.0 / (a * a));
        H[2 * N][2 * N] += 4.0 * q * q * q * (-2.0 / (b * b));
        return H;
    }
    double support_radius() const { return std::pow(std::pow(a, 4) + b * b, 0.25); }
};

} // namespace detail

template <int N>
SmoothFunction<N> make_function(const DataSpec& spec) {
    constexpr int D = 2 * N + 1;
    using Grad = typename SmoothFunction<N>::Gradient;
    using Hess = typename SmoothFunction<N>::Hessian;
    if (!spec.center.empty() && spec.center.size() != static_cast<std::size_t>(D))
        throw DomainError("config", "data center must have 2n+1 coordinates");
    Point<N> c{};
    for (std::size_t k = 0; k < spec.center.size(); ++k) c[static_cast<int>(k)] = spec.center[k];

    SmoothFunction<N> u;
    if (spec.kind == "constant") {
        const double v = spec.value;
        u.value = [v](const Point<N>&) { return v; };
        u.gradient = [](const Point<N>&) { return Grad{}; };
        u.hessian = [](const Point<N>&) { return Hess{}; };
        u.far = FarField<N>{c, 0.0, v};
        u.bound = std::abs(v);
    } else if (spec.kind == "gaussian-bump") {
        if (!(spec.width > 0.0)) throw DomainError("config", "gaussian width must be positive");
        const double A = spec.amplitude, w2 = spec.width * spec.width, w4 = w2 * w2;
        auto ell = [=](const Point<N>& w) {
            Grad g{};
            for (int k = 0; k < 2 * N; ++k) g[k] = -2.0 * w[k] / w2;
            g[2 * N] = -2.0 * w.t / w4;
            return g;
        };
        auto G = [=](const Point<N>& w) { return A * std::exp(-w.z_norm2() / w2 - w.t * w.t / w4); };
        u.value = [=](const Point<N>& xi) { return G(increment(c, xi)); };
        u.gradient = [=](const Point<N>& xi) {
            const auto L = detail::localize(c, xi);
            const double g0 = G(L.w);
            auto g = ell(L.w);
            for (auto& e : g) e *= g0;
            return detail::pull_gradient<N>(L, g);
        };
        u.hessian = [=](const Point<N>& xi) {
            const auto L = detail::localize(c, xi);
            const double g0 = G(L.w);
            const auto l = ell(L.w);
            Hess H{};
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j) H[i][j] = g0 * l[i] * l[j];
            for (int k = 0; k < 2 * N; ++k) H[k][k] += g0 * (-2.0 / w2);
            H[2 * N][2 * N] += g0 * (-2.0 / w4);
            return detail::pull_hessian<N>(L, H);
        };
        u.bound = std::abs(A);
    } else if (spec.kind == "sign-flip-shell") {
        if (!(spec.width > 0.0)) throw DomainError("config", "shell width must be positive");
        const double a = spec.a, b = spec.b, r1 = spec.r1, r2 = spec.r2, w = spec.width;
        u.value = [=](const Point<N>& xi) {
            const double r = koranyi_norm(increment(c, xi));
            const double e1 = (r - r1) / w, e2 = (r - r2) / w;
            return a * std::exp(-e1 * e1) - b * std::exp(-e2 * e2);
        };
        u.bound = std::abs(a) + std::abs(b);
    } else if (spec.kind == "bump" || spec.kind == "polynomial-cutoff") {
        if (!(spec.a > 0.0)) throw DomainError("config", "bump radius must be positive");
        const bool poly = spec.kind == "polynomial-cutoff";
        const double bt = poly ? spec.a * spec.a : spec.b;
        if (!(bt > 0.0)) throw DomainError("config", "bump height must be positive");
        const detail::Bump4<N> B{spec.a, bt};
        const auto cf = poly ? spec.coeffs : std::array<double, 4>{1.0, 0.0, 0.0, 0.0};
        auto P = [cf](const Point<N>& w) { return cf[0] + cf[1] * w.x[0] + cf[2] * w.z_norm2() + cf[3] * w.t; };
        auto dP = [cf](const Point<N>& w) {
            Grad g{};
            g[0] = cf[1];
            for (int k = 0; k < 2 * N; ++k) g[k] += 2.0 * cf[2] * w[k];
            g[2 * N] = cf[3];
            return g;
        };
        u.value = [=](const Point<N>& xi) {
            const auto w = increment(c, xi);
            return P(w) * B.value(w);
        };
        u.gradient = [=](const Point<N>& xi) {
            const auto L = detail::localize(c, xi);
            const auto gb = B.gradient(L.w), gp = dP(L.w);
            const double pv = P(L.w), bv = B.value(L.w);
            Grad g{};
            for (int k = 0; k < D; ++k) g[k] = pv * gb[k] + bv * gp[k];
            return detail::pull_gradient<N>(L, g);
        };
        u.hessian = [=](const Point<N>& xi) {
            const auto L = detail::localize(c, xi);
            const auto gb = B.gradient(L.w), gp = dP(L.w);
            const auto hb = B.hessian(L.w);
            const double pv = P(L.w), bv = B.value(L.w);
            Hess H{};
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j) H[i][j] = pv * hb[i][j] + gp[i] * gb[j] + gb[i] * gp[j];
            for (int k = 0; k < 2 * N; ++k) H[k][k] += 2.0 * cf[2] * bv;
            return detail::pull_hessian<N>(L, H);
        };
        u.far = FarField<N>{c, B.support_radius(), 0.0};
        const double R = B.support_radius();
        u.bound = std::abs(cf[0]) + std::abs(cf[1]) * R + std::abs(cf[2]) * R * R + std::abs(cf[3]) * R * R;
    } else {
        throw DomainError("config", "unknown data kind '" + spec.kind + "'");
    }
    return u;
}

// Value assumed beyond the truncation radius when the function is used as
// exterior data: the far-field constant if there is one, otherwise 0.
template <int N>
double far_value_of(const SmoothFunction<N>& u) {
    return u.far ? u.far->value : 0.0;
}

} // namespace hfrac
