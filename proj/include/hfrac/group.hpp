#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "random.hpp"

namespace hfrac {

// A point (x, y, t) of the Heisenberg group H^N. Coordinates are numbered
// 0..N-1 for x, N..2N-1 for y and 2N for t; the first 2N form z.
template <int N>
struct Point {
    static_assert(N >= 1, "group index must be positive");
    static constexpr int n = N;
    static constexpr int dim = 2 * N + 1;

    std::array<double, N> x{};
    std::array<double, N> y{};
    double t = 0.0;

    double& operator[](int k) { return k < N ? x[k] : (k < 2 * N ? y[k - N] : t); }
    double operator[](int k) const { return k < N ? x[k] : (k < 2 * N ? y[k - N] : t); }

    static Point from(const std::array<double, dim>& c) {
        Point p;
        for (int k = 0; k < dim; ++k) p[k] = c[k];
        return p;
    }
    std::array<double, dim> coords() const {
        std::array<double, dim> c{};
        for (int k = 0; k < dim; ++k) c[k] = (*this)[k];
        return c;
    }

    double z_norm2() const {
        double s = 0.0;
        for (int j = 0; j < N; ++j) s += x[j] * x[j] + y[j] * y[j];
        return s;
    }

    bool operator==(const Point&) const = default;
};

// Symplectic pairing <y, x'> - <x, y'> entering the t-component.
template <int N>
inline double symplectic(const Point<N>& a, const Point<N>& b) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) s += a.y[j] * b.x[j] - a.x[j] * b.y[j];
    return s;
}

template <int N>
inline Point<N> group_mul(const Point<N>& a, const Point<N>& b) {
    Point<N> c;
    for (int j = 0; j < N; ++j) {
        c.x[j] = a.x[j] + b.x[j];
        c.y[j] = a.y[j] + b.y[j];
    }
    c.t = a.t + b.t + 2.0 * symplectic(a, b);
    return c;
}

template <int N>
inline Point<N> operator*(const Point<N>& a, const Point<N>& b) { return group_mul(a, b); }

template <int N>
inline Point<N> group_inv(const Point<N>& a) {
    Point<N> c;
    for (int j = 0; j < N; ++j) {
        c.x[j] = -a.x[j];
        c.y[j] = -a.y[j];
    }
    c.t = -a.t;
    return c;
}

// b^{-1} o a, the increment used by every distance in the library.
template <int N>
inline Point<N> increment(const Point<N>& from, const Point<N>& to) {
    Point<N> c;
    for (int j = 0; j < N; ++j) {
        c.x[j] = to.x[j] - from.x[j];
        c.y[j] = to.y[j] - from.y[j];
    }
    double s = 0.0;
    for (int j = 0; j < N; ++j) s += from.x[j] * to.y[j] - from.y[j] * to.x[j];
    c.t = to.t - from.t + 2.0 * s;
    return c;
}

template <int N>
inline Point<N> dilate(double lambda, const Point<N>& a) {
    if (!(lambda > 0.0)) throw DomainError("dilation factor must be positive");
    Point<N> c;
    for (int j = 0; j < N; ++j) {
        c.x[j] = lambda * a.x[j];
        c.y[j] = lambda * a.y[j];
    }
    c.t = lambda * lambda * a.t;
    return c;
}

template <int N>
inline double koranyi_norm(const Point<N>& a) {
    const double z2 = a.z_norm2();
    return std::sqrt(std::sqrt(z2 * z2 + a.t * a.t));
}

template <int N>
inline double box_norm(const Point<N>& a) {
    return std::max(std::sqrt(a.z_norm2()), std::sqrt(std::abs(a.t)));
}

enum class NormKind { koranyi, box };

inline const char* to_string(NormKind k) { return k == NormKind::koranyi ? "koranyi" : "box"; }

inline NormKind parse_norm_kind(const std::string& s) {
    if (s == "koranyi") return NormKind::koranyi;
    if (s == "box") return NormKind::box;
    throw DomainError("config", "unknown norm kind '" + s + "'");
}

struct HomNorm {
    NormKind kind = NormKind::koranyi;
    double lambda_equiv = 1.0;

    template <int N>
    double operator()(const Point<N>& a) const {
        return kind == NormKind::koranyi ? koranyi_norm(a) : box_norm(a);
    }
};

template <int N>
double norm_equivalence_constant(const HomNorm& norm, std::span<const Point<N>> samples) {
    if (samples.empty()) throw DomainError("empty sample set");
    double lam = 1.0;
    for (const auto& p : samples) {
        const double k = koranyi_norm(p);
        const double d = norm(p);
        if (k == 0.0 || d == 0.0) throw DomainError("sample set contains the identity");
        lam = std::max({lam, d / k, k / d});
    }
    return lam;
}

constexpr int homogeneous_dimension(int n) {
    if (n < 1) throw DomainError("group index must be positive");
    return 2 * n + 2;
}

// Psi(xi, eta) = d_o(eta^{-1} o xi).
template <int N>
inline double pseudo_dist(const HomNorm& norm, const Point<N>& xi, const Point<N>& eta) {
    return norm(increment(eta, xi));
}

// ---- closed-form measures ----------------------------------------------

// Surface area of the Euclidean unit sphere S^{d-1} in R^d.
inline double euclidean_sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

// Lebesgue measure of the Koranyi unit ball in H^n. Integrating the t-extent
// 2 sqrt(1 - r^4) against r^{2n-1} gives omega_{2n-1} B(n/2, 3/2) / 2.
inline double koranyi_ball_volume(int n) {
    return euclidean_sphere_area(2 * n) * std::beta(0.5 * n, 1.5) / 2.0;
}

// Surface measure of the Koranyi unit sphere for the polar decomposition
// d eta = r^{Q-1} dr d sigma, i.e. Q |B_1|.
inline double koranyi_sphere_measure(int n) {
    return homogeneous_dimension(n) * koranyi_ball_volume(n);
}

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

// Monte-Carlo volume of B_R(center), sampling the Euclidean bounding box of
// the translated ball.
template <int N>
Estimate ball_volume_mc(const Point<N>& center, double R, std::size_t samples, std::uint64_t seed) {
    if (!(R > 0.0)) throw DomainError("ball radius must be positive");
    if (samples == 0) throw DomainError("sample count must be positive");
    // center o zeta with |zeta| < R: |z| <= R, |t| <= R^2, plus the cross term.
    const double zc = std::sqrt(center.z_norm2());
    const double t_half = R * R + 2.0 * zc * R;
    double box = std::pow(2.0 * R, 2 * N) * 2.0 * t_half;
    Rng rng(seed);
    std::size_t hits = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        Point<N> p;
        for (int j = 0; j < N; ++j) {
            p.x[j] = center.x[j] + rng.uniform(-R, R);
            p.y[j] = center.y[j] + rng.uniform(-R, R);
        }
        p.t = center.t + rng.uniform(-t_half, t_half);
        if (koranyi_norm(increment(center, p)) < R) ++hits;
    }
    const double f = static_cast<double>(hits) / static_cast<double>(samples);
    return {box * f, box * std::sqrt(f * (1.0 - f) / static_cast<double>(samples))};
}

template <int N>
Point<N> random_point(Rng& rng, double scale = 1.0) {
    Point<N> p;
    for (int j = 0; j < N; ++j) {
        p.x[j] = rng.uniform(-scale, scale);
        p.y[j] = rng.uniform(-scale, scale);
    }
    p.t = rng.uniform(-scale * scale, scale * scale);
    return p;
}

} // namespace hfrac
