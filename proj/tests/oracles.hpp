#pragma once

// Reference values computed independently of the library code paths they check.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace oracle {

// Raw H^1 law, written out by hand.
struct P3 {
    double x, y, t;
};

inline P3 mul(P3 a, P3 b) { return {a.x + b.x, a.y + b.y, a.t + b.t + 2.0 * (a.y * b.x - a.x * b.y)}; }
inline double koranyi(P3 a) { return std::pow(std::pow(a.x * a.x + a.y * a.y, 2) + a.t * a.t, 0.25); }

// Closed form of the Euclidean fractional Laplacian constant in R^d.
inline double c1_closed(int n, double s) {
    const double d = 2.0 * n + 1.0, pi = std::numbers::pi;
    return s * std::pow(4.0, s) * std::tgamma(0.5 * d + s) / (std::pow(pi, 0.5 * d) * std::tgamma(1.0 - s));
}

struct Mc {
    double value, error;
};

// |B_1| in H^1 by hit-or-miss in [-1,1]^3.
inline Mc unit_ball_volume(std::uint64_t seed, std::size_t M) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::size_t hit = 0;
    for (std::size_t k = 0; k < M; ++k)
        if (koranyi({U(g), U(g), U(g)}) < 1.0) ++hit;
    const double f = double(hit) / M;
    return {8.0 * f, 8.0 * std::sqrt(f * (1 - f) / M)};
}

// int_{B_1} x^2 in H^1 by Monte Carlo; c2 = (Q + 2) times this.
inline Mc ball_x2_moment(std::uint64_t seed, std::size_t M) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double s = 0, sq = 0;
    for (std::size_t k = 0; k < M; ++k) {
        const P3 p{U(g), U(g), U(g)};
        const double v = koranyi(p) < 1.0 ? p.x * p.x : 0.0;
        s += v;
        sq += v * v;
    }
    const double m = s / M;
    return {8.0 * m, 8.0 * std::sqrt((sq / M - m * m) / M)};
}

// Tail(1; 0, R)^{p-1} for n = 1, p = 2, kernel exponent Q + 2s: Monte Carlo
// over the shell 1 <= |eta| < 2 inside [-2,2]^2 x [-4,4], then the geometric
// series of dyadic shells (each one scales by 4^{-s}); R drops out.
inline Mc unit_tail(double s, std::uint64_t seed, std::size_t M) {
    std::mt19937_64 g(seed);
    std::uniform_real_distribution<double> Uz(-2.0, 2.0), Ut(-4.0, 4.0);
    const double vol = 4.0 * 4.0 * 8.0;
    double sum = 0, sq = 0;
    for (std::size_t k = 0; k < M; ++k) {
        const P3 p{Uz(g), Uz(g), Ut(g)};
        const double r = koranyi(p);
        const double v = (r >= 1.0 && r < 2.0) ? std::pow(r, -4.0 - 2.0 * s) : 0.0;
        sum += v;
        sq += v * v;
    }
    const double m = sum / M;
    const double geo = 1.0 / (1.0 - std::pow(4.0, -s));
    return {vol * m * geo, vol * std::sqrt((sq / M - m * m) / M) * geo};
}

} // namespace oracle
