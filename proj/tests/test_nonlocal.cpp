#include <catch_amalgamated.hpp>

#include <hfrac/data.hpp>
#include <hfrac/nonlocal.hpp>

#include "oracles.hpp"

using namespace hfrac;
using Catch::Approx;

TEST_CASE("c1 agrees with the Gamma-function closed form", "[nonlocal]") {
    for (int n : {1, 2})
        for (double s : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) CHECK(c1_constant(n, s) == Approx(oracle::c1_closed(n, s)).epsilon(1e-6));
    CHECK_THROWS_AS(c1_constant(1, 1.0), DomainError);
    CHECK_THROWS_AS(c1_constant(0, 0.5), DomainError);
}

TEST_CASE("c2 against a Monte-Carlo moment over the unit ball", "[nonlocal]") {
    QuadConfig q;
    const auto c2 = c2_constant<1>(0.5, q);
    const auto m = oracle::ball_x2_moment(21, 2'000'000);
    CHECK(c2.value == Approx(2.0 * std::numbers::pi).epsilon(2e-3));
    CHECK(std::abs(c2.value - 6.0 * m.value) < 4.0 * std::hypot(c2.error, 6.0 * m.error) + 1e-3);
    // the isotropy of the sphere in the horizontal directions
    CHECK(c2_component<1>(1, q).value == Approx(c2.value).epsilon(5e-3));
}

TEST_CASE("tail of the constant function", "[nonlocal]") {
    QuadConfig q;
    SmoothFunction<1> one = make_function<1>(DataSpec{"constant", 1.0});
    for (double s : {0.3, 0.5, 0.8}) {
        const auto mc = oracle::unit_tail(s, 31, 1'000'000);
        const double exact = std::numbers::pi * std::numbers::pi / s;
        CHECK(mc.value == Approx(exact).epsilon(0.01));
        for (double R : {1.0, 2.0}) {
            const auto t = tail(one, Point<1>{}, R, FracParams{1, s, 2.0}, q);
            CHECK(t.value == Approx(exact).epsilon(1e-9));
        }
    }
    // p = 3: Tail = (pi^2 / (1.5 s) ... )^{1/2} with kernel exponent Q + 3s
    const double s = 0.4;
    const auto t3 = tail(one, Point<1>{}, 1.0, FracParams{1, s, 3.0}, q);
    CHECK(t3.value == Approx(std::sqrt(2.0 * std::numbers::pi * std::numbers::pi / (3.0 * s))).epsilon(1e-9));
}

TEST_CASE("tail is monotone in |u|", "[nonlocal]") {
    QuadConfig q;
    q.angular_samples = 1024;
    DataSpec a{"gaussian-bump"};
    a.amplitude = 0.5;
    a.width = 1.0;
    DataSpec b = a;
    b.amplitude = 1.0;
    const FracParams prm{1, 0.5, 2.0};
    const double ta = tail(make_function<1>(a), Point<1>{}, 1.0, prm, q).value;
    const double tb = tail(make_function<1>(b), Point<1>{}, 1.0, prm, q).value;
    CHECK(ta <= tb);
    CHECK(ta == Approx(0.5 * tb).epsilon(1e-9));
}

TEST_CASE("operators vanish on constants", "[nonlocal]") {
    QuadConfig q;
    q.angular_samples = 512;
    const auto c = make_function<1>(DataSpec{"constant", 2.5});
    Point<1> xi;
    xi.x[0] = 0.3;
    for (double p : {1.5, 2.0, 3.0}) CHECK(p_operator(c, xi, FracParams{1, 0.5, p}, q).value == 0.0);
    CHECK(frac_sublaplacian(c, xi, FracParams{1, 0.5, 2.0}, q).value == 0.0);
}

TEST_CASE("p = 2 operator times C(n,s) equals the fractional sublaplacian", "[nonlocal]") {
    QuadConfig q;
    q.angular_samples = 2048;
    DataSpec b{"bump"};
    b.b = 1.0;
    const auto u = make_function<1>(b);
    Point<1> xi;
    xi.x[0] = 0.2;
    xi.t = -0.1;
    for (double s : {0.3, 0.6, 0.9}) {
        const FracParams prm{1, s, 2.0};
        const double C = frac_constant<1>(s, q);
        const auto a = frac_sublaplacian(u, xi, prm, q);
        const auto b2 = p_operator(u, xi, prm, q);
        CHECK(C * b2.value == Approx(a.value).epsilon(0.01));
    }
}

TEST_CASE("parameter validation", "[nonlocal]") {
    CHECK_THROWS_AS(FracParams({1, 0.0, 2.0}).validate(), DomainError);
    CHECK_THROWS_AS(FracParams({1, 0.5, 1.0}).validate(), DomainError);
    CHECK(FracParams({1, 0.8, 5.0}).regime() == Regime::critical);
    FracParams sup{1, 0.8, 6.0};
    CHECK(sup.regime() == Regime::supercritical);
    CHECK_THROWS_AS(sup.p_star(), DomainError);
    sup.epsilon = 0.9;
    CHECK_THROWS_AS(sup.validate(), DomainError);
    sup.epsilon = 0.2;
    CHECK_NOTHROW(sup.validate());
    CHECK(sup.p_star_eps() == Approx(4.0 * 6.0 / (4.0 - 0.6 * 6.0)));
    FracParams sub{1, 0.5, 2.0};
    CHECK(sub.p_star() == Approx(4.0 * 2.0 / (4.0 - 1.0)));
}
