#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "group.hpp"

namespace hfrac {

// Outside B_radius(center) the function is identically `value`. Compact
// support is value == 0; a global constant is radius == 0.
template <int N>
struct FarField {
    Point<N> center{};
    double radius = 0.0;
    double value = 0.0;
};

template <int N>
struct SmoothFunction {
    static constexpr int D = 2 * N + 1;
    using Gradient = std::array<double, D>;
    using Hessian = std::array<std::array<double, D>, D>;

    std::function<double(const Point<N>&)> value;
    // Optional Euclidean partials in coordinate order (x, y, t).
    std::function<Gradient(const Point<N>&)> gradient;
    std::function<Hessian(const Point<N>&)> hessian;
    double fd_step = 1e-4;
    std::optional<FarField<N>> far;
    std::optional<double> bound;   // sup |u|, when known

    double operator()(const Point<N>& p) const { return value(p); }
    bool has_partials() const { return static_cast<bool>(gradient) && static_cast<bool>(hessian); }
};

namespace detail {

// Scales every coordinate linearly; used for flows exp(eps V), where the
// Lie-algebra element is scaled, not dilated.
template <int N>
Point<N> scale_coords(double c, const Point<N>& v) {
    Point<N> r;
    for (int k = 0; k < 2 * N + 1; ++k) r[k] = c * v[k];
    return r;
}

// Unit step along the field with index j: 0 is T, 1..2N are X_1..X_{2N}.
template <int N>
Point<N> field_direction(int j) {
    Point<N> e;
    if (j == 0) e.t = 1.0;
    else e[j - 1] = 1.0;
    return e;
}

// X_j = d_{b_j} + a_j d_t; returns (b_j, a_j(xi)).
template <int N>
std::pair<int, double> field_coefficients(int j, const Point<N>& xi) {
    if (j == 0) return {2 * N, 0.0};
    const int k = j - 1;
    if (k < N) return {k, 2.0 * xi.y[k]};
    return {k, -2.0 * xi.x[k - N]};
}

// d a_j / d (coordinate c)
template <int N>
double field_coefficient_slope(int j, int c) {
    if (j == 0) return 0.0;
    const int k = j - 1;
    if (k < N) return c == N + k ? 2.0 : 0.0;
    return c == k - N ? -2.0 : 0.0;
}

inline constexpr std::array<double, 4> d1_offsets{-2.0, -1.0, 1.0, 2.0};
inline constexpr std::array<double, 4> d1_coeffs{1.0, -8.0, 8.0, -1.0};   // / 12h

template <typename F>
double fd_first(const F& f, double h) {
    double s = 0.0;
    for (int m = 0; m < 4; ++m) s += d1_coeffs[m] * f(d1_offsets[m] * h);
    return s / (12.0 * h);
}

template <typename F>
double fd_second(const F& f, double h) {
    const double s = -f(-2.0 * h) + 16.0 * f(-h) - 30.0 * f(0.0) + 16.0 * f(h) - f(2.0 * h);
    return s / (12.0 * h * h);
}

template <int N>
void check_field_index(int j) {
    if (j < 0 || j > 2 * N) throw DomainError("vector field index out of range");
}

} // namespace detail

template <int N>
double vector_field(int j, const SmoothFunction<N>& u, const Point<N>& xi) {
    detail::check_field_index<N>(j);
    if (u.gradient) {
        const auto g = u.gradient(xi);
        const auto [b, a] = detail::field_coefficients(j, xi);
        return j == 0 ? g[2 * N] : g[b] + a * g[2 * N];
    }
    const Point<N> e = detail::field_direction<N>(j);
    return detail::fd_first([&](double eps) { return u(group_mul(xi, detail::scale_coords(eps, e))); }, u.fd_step);
}

// X_i X_j u (not symmetrized); indices as in vector_field.
template <int N>
double field_pair(int i, int j, const SmoothFunction<N>& u, const Point<N>& xi) {
    detail::check_field_index<N>(i);
    detail::check_field_index<N>(j);
    if (u.has_partials()) {
        const auto g = u.gradient(xi);
        const auto H = u.hessian(xi);
        const int T = 2 * N;
        const auto [bi, ai] = detail::field_coefficients(i, xi);
        const auto [bj, aj] = detail::field_coefficients(j, xi);
        return H[bi][bj] + detail::field_coefficient_slope<N>(j, bi) * g[T] + aj * H[bi][T] +
               ai * (H[T][bj] + aj * H[T][T]);
    }
    const Point<N> ei = detail::field_direction<N>(i);
    const Point<N> ej = detail::field_direction<N>(j);
    const double h = u.fd_step;
    double s = 0.0;
    for (int m = 0; m < 4; ++m) {
        const Point<N> a = group_mul(xi, detail::scale_coords(detail::d1_offsets[m] * h, ei));
        double inner = 0.0;
        for (int l = 0; l < 4; ++l)
            inner += detail::d1_coeffs[l] * u(group_mul(a, detail::scale_coords(detail::d1_offsets[l] * h, ej)));
        s += detail::d1_coeffs[m] * inner;
    }
    return s / (144.0 * h * h);
}

template <int N>
std::array<double, 2 * N> horizontal_gradient(const SmoothFunction<N>& u, const Point<N>& xi) {
    std::array<double, 2 * N> g{};
    for (int j = 1; j <= 2 * N; ++j) g[j - 1] = vector_field(j, u, xi);
    return g;
}

template <int N>
using HorizontalMatrix = std::array<std::array<double, 2 * N>, 2 * N>;

// (1/2)(X_i X_j + X_j X_i) u. Without analytic partials the entries come from
// second derivatives along horizontal flows, d^2/de^2 u(xi o e v) = <v, D v>,
// and polarization for the off-diagonal part.
template <int N>
HorizontalMatrix<N> symmetrized_hessian(const SmoothFunction<N>& u, const Point<N>& xi) {
    HorizontalMatrix<N> D{};
    if (u.has_partials()) {
        for (int i = 0; i < 2 * N; ++i)
            for (int j = i; j < 2 * N; ++j) {
                const double v = 0.5 * (field_pair(i + 1, j + 1, u, xi) + field_pair(j + 1, i + 1, u, xi));
                D[i][j] = D[j][i] = v;
            }
        return D;
    }
    const double h = u.fd_step;
    auto along = [&](const Point<N>& v) {
        return detail::fd_second([&](double eps) { return u(group_mul(xi, detail::scale_coords(eps, v))); }, h);
    };
    for (int i = 0; i < 2 * N; ++i) D[i][i] = along(detail::field_direction<N>(i + 1));
    for (int i = 0; i < 2 * N; ++i)
        for (int j = i + 1; j < 2 * N; ++j) {
            Point<N> plus, minus;
            plus[i] = 1.0;
            plus[j] = 1.0;
            minus[i] = 1.0;
            minus[j] = -1.0;
            D[i][j] = D[j][i] = 0.25 * (along(plus) - along(minus));
        }
    return D;
}

template <int N>
double sublaplacian(const SmoothFunction<N>& u, const Point<N>& xi) {
    const auto D = symmetrized_hessian(u, xi);
    double tr = 0.0;
    for (int i = 0; i < 2 * N; ++i) tr += D[i][i];
    return tr;
}

template <int N>
struct TaylorPoly2 {
    Point<N> base{};
    double value = 0.0;
    std::array<double, 2 * N> gradient{};
    double dt = 0.0;
    HorizontalMatrix<N> hessian{};
};

// Derivatives of xi -> u(xi0 o xi) at the identity are the left-invariant
// derivatives of u at xi0.
template <int N>
TaylorPoly2<N> maclaurin_p2(const SmoothFunction<N>& u, const Point<N>& xi0) {
    TaylorPoly2<N> P;
    P.base = xi0;
    P.value = u(xi0);
    P.gradient = horizontal_gradient(u, xi0);
    P.dt = vector_field(0, u, xi0);
    P.hessian = symmetrized_hessian(u, xi0);
    return P;
}

template <int N>
double taylor_eval(const TaylorPoly2<N>& P, const Point<N>& xi) {
    const Point<N> d = increment(P.base, xi);
    double lin = 0.0, quad = 0.0;
    for (int i = 0; i < 2 * N; ++i) {
        lin += P.gradient[i] * d[i];
        double row = 0.0;
        for (int j = 0; j < 2 * N; ++j) row += P.hessian[i][j] * d[j];
        quad += d[i] * row;
    }
    return P.value + lin + P.dt * d.t + 0.5 * quad;
}

struct RemainderOrder {
    bool exact = false;   // remainder below 1e-14 on the whole ladder
    double slope = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> lambdas;
    std::vector<double> remainders;
};

// Log-log slope of |u - P_2| along xi0 o Phi_lambda(direction), lambda = 2^-k.
template <int N>
RemainderOrder remainder_order(const SmoothFunction<N>& u, const Point<N>& xi0, const Point<N>& direction,
                               int k_min = 2, int k_max = 10) {
    if (koranyi_norm(direction) == 0.0) throw DomainError("zero direction");
    const auto P = maclaurin_p2(u, xi0);
    RemainderOrder out;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = k_min; k <= k_max; ++k) {
        const double lam = std::ldexp(1.0, -k);
        const Point<N> xi = group_mul(xi0, dilate(lam, direction));
        const double r = std::abs(u(xi) - taylor_eval(P, xi));
        out.lambdas.push_back(lam);
        out.remainders.push_back(r);
        if (r < 1e-14) continue;
        const double lx = std::log(lam), ly = std::log(r);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) {
        out.exact = true;
        return out;
    }
    out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return out;
}

} // namespace hfrac
