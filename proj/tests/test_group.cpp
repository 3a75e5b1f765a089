#include <catch_amalgamated.hpp>

#include <hfrac/calculus.hpp>
#include <hfrac/group.hpp>

#include "oracles.hpp"

using namespace hfrac;
using Catch::Approx;

namespace {

template <int N>
double dist(const Point<N>& a, const Point<N>& b) {
    double m = 0.0;
    for (int k = 0; k < 2 * N + 1; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

} // namespace

TEST_CASE("group law matches the hand-written H^1 product", "[group]") {
    Rng rng(1);
    for (int k = 0; k < 200; ++k) {
        const auto a = random_point<1>(rng, 2.0), b = random_point<1>(rng, 2.0);
        const auto ab = group_mul(a, b);
        const auto o = oracle::mul({a.x[0], a.y[0], a.t}, {b.x[0], b.y[0], b.t});
        CHECK(ab.x[0] == Approx(o.x));
        CHECK(ab.y[0] == Approx(o.y));
        CHECK(ab.t == Approx(o.t).margin(1e-14));
    }
}

TEMPLATE_TEST_CASE_SIG("group axioms and dilations", "[group]", ((int N), N), 1, 2, 3) {
    Rng rng(2 + N);
    for (int k = 0; k < 500; ++k) {
        const auto a = random_point<N>(rng, 3.0), b = random_point<N>(rng, 3.0), c = random_point<N>(rng, 3.0);
        CHECK(dist(group_mul(group_mul(a, b), c), group_mul(a, group_mul(b, c))) < 1e-12);
        CHECK(dist(group_mul(a, group_inv(a)), Point<N>{}) < 1e-13);
        CHECK(dist(group_mul(group_inv(a), a), Point<N>{}) < 1e-13);
        CHECK(group_mul(a, Point<N>{}) == a);
        const double lam = 0.1 + 3.0 * rng.uniform();
        CHECK(dist(dilate(lam, group_mul(a, b)), group_mul(dilate(lam, a), dilate(lam, b))) < 1e-11);
        CHECK(koranyi_norm(dilate(lam, a)) == Approx(lam * koranyi_norm(a)).epsilon(1e-12));
        CHECK(box_norm(dilate(lam, a)) == Approx(lam * box_norm(a)).epsilon(1e-12));
        CHECK(koranyi_norm(group_inv(a)) == Approx(koranyi_norm(a)).epsilon(1e-12));
        // left invariance of the pseudo-distance
        CHECK(pseudo_dist(HomNorm{}, group_mul(c, a), group_mul(c, b)) ==
              Approx(pseudo_dist(HomNorm{}, a, b)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(dilate(0.0, Point<N>{}), DomainError);
}

TEST_CASE("norm equivalence constant of the box norm", "[group]") {
    Rng rng(5);
    std::vector<Point<1>> pts;
    for (int k = 0; k < 2000; ++k) pts.push_back(random_point<1>(rng, 1.0));
    const double lam = norm_equivalence_constant<1>(HomNorm{NormKind::box}, pts);
    // box / koranyi ranges over [2^{-1/4}, 1] on the unit sphere
    CHECK(lam >= 1.0);
    CHECK(lam <= std::pow(2.0, 0.25) + 1e-12);
    std::vector<Point<1>> bad{Point<1>{}};
    CHECK_THROWS_AS(norm_equivalence_constant<1>(HomNorm{}, bad), DomainError);
    CHECK_THROWS_AS(parse_norm_kind("euclid"), DomainError);
}

TEST_CASE("closed-form ball volume against Monte Carlo", "[group]") {
    CHECK(koranyi_ball_volume(1) == Approx(std::numbers::pi * std::numbers::pi / 2.0).epsilon(1e-14));
    CHECK(koranyi_sphere_measure(1) == Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
    const auto mc = oracle::unit_ball_volume(11, 2'000'000);
    CHECK(std::abs(mc.value - koranyi_ball_volume(1)) < 4.0 * mc.error);
}

TEST_CASE("measure is left invariant and scales by lambda^Q", "[group]") {
    const auto v0 = ball_volume_mc(Point<1>{}, 1.0, 400000, 3);
    Point<1> c;
    c.x[0] = 0.7;
    c.y[0] = -0.4;
    c.t = 1.3;
    const auto v1 = ball_volume_mc(c, 1.0, 400000, 4);
    CHECK(std::abs(v0.value - v1.value) < 4.0 * std::hypot(v0.error, v1.error));
    const auto v2 = ball_volume_mc(c, 2.0, 400000, 5);
    CHECK(v2.value / v1.value == Approx(16.0).epsilon(0.01));
    CHECK(v0.value == Approx(koranyi_ball_volume(1)).epsilon(0.01));
}

TEST_CASE("left-invariant fields and the commutator", "[group][calculus]") {
    // u = x t + y^2 x: X1 u = t + y^2 + 2y x, X2 u = 2 x y - 2 x^2
    SmoothFunction<1> u;
    u.value = [](const Point<1>& p) { return p.x[0] * p.t + p.y[0] * p.y[0] * p.x[0]; };
    Rng rng(9);
    for (int k = 0; k < 100; ++k) {
        const auto p = random_point<1>(rng, 1.0);
        const double x = p.x[0], y = p.y[0], t = p.t;
        CHECK(vector_field(1, u, p) == Approx(t + y * y + 2.0 * y * x).margin(1e-7));
        CHECK(vector_field(2, u, p) == Approx(2.0 * x * y - 2.0 * x * x).margin(1e-7));
        CHECK(vector_field(0, u, p) == Approx(x).margin(1e-7));
        const double comm = field_pair(1, 2, u, p) - field_pair(2, 1, u, p);
        CHECK(comm == Approx(-4.0 * vector_field(0, u, p)).margin(1e-5));
    }
    CHECK_THROWS_AS(vector_field(3, u, Point<1>{}), DomainError);
}
