#include <catch_amalgamated.hpp>

#include <hfrac/calculus.hpp>
#include <hfrac/data.hpp>

using namespace hfrac;
using Catch::Approx;

namespace {

SmoothFunction<1> without_partials(const SmoothFunction<1>& u) {
    SmoothFunction<1> v;
    v.value = u.value;
    v.far = u.far;
    v.bound = u.bound;
    return v;
}

} // namespace

TEST_CASE("sublaplacian of the C3 bump at its center", "[calculus]") {
    DataSpec b;
    b.kind = "bump";
    b.a = 1.0;
    b.b = 1.0;
    const auto u = make_function<1>(b);
    // X_j^2 at the origin reduces to the Euclidean second derivative: 2 * (4 * -2)
    CHECK(sublaplacian(u, Point<1>{}) == Approx(-16.0).epsilon(1e-12));
    CHECK(sublaplacian(without_partials(u), Point<1>{}) == Approx(-16.0).epsilon(1e-6));
}

TEST_CASE("analytic and flow-difference Hessians agree", "[calculus]") {
    DataSpec specs[3];
    specs[0].kind = "bump";
    specs[0].a = 1.3;
    specs[0].b = 0.9;
    specs[0].center = {0.1, -0.2, 0.05};
    specs[1].kind = "gaussian-bump";
    specs[1].width = 0.7;
    specs[1].center = {0.3, 0.2, -0.1};
    specs[2].kind = "polynomial-cutoff";
    specs[2].a = 1.2;
    specs[2].coeffs = {1.0, 0.5, -0.3, 0.2};
    Rng rng(4);
    for (const auto& sp : specs) {
        const auto u = make_function<1>(sp);
        const auto v = without_partials(u);
        for (int k = 0; k < 20; ++k) {
            const auto p = random_point<1>(rng, 0.4);
            for (int j = 0; j <= 2; ++j) CHECK(vector_field(j, u, p) == Approx(vector_field(j, v, p)).margin(1e-6));
            const auto A = symmetrized_hessian(u, p), B = symmetrized_hessian(v, p);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) CHECK(A[i][j] == Approx(B[i][j]).margin(1e-5));
            for (int i = 1; i <= 2; ++i)
                for (int j = 1; j <= 2; ++j) CHECK(field_pair(i, j, u, p) == Approx(field_pair(i, j, v, p)).margin(1e-5));
        }
    }
}

TEST_CASE("Taylor polynomial of a homogeneous cubic", "[calculus]") {
    SmoothFunction<1> u;
    u.value = [](const Point<1>& p) { return p.x[0] * p.x[0] * p.x[0]; };
    u.gradient = [](const Point<1>& p) { return SmoothFunction<1>::Gradient{3.0 * p.x[0] * p.x[0], 0.0, 0.0}; };
    u.hessian = [](const Point<1>& p) {
        SmoothFunction<1>::Hessian H{};
        H[0][0] = 6.0 * p.x[0];
        return H;
    };
    Point<1> dir;
    dir.x[0] = 1.0;
    const auto r = remainder_order(u, Point<1>{}, dir);
    REQUIRE_FALSE(r.exact);
    CHECK(r.slope == Approx(3.0).margin(1e-9));

    // a second-order polynomial in the graded sense is reproduced exactly
    SmoothFunction<1> q;
    q.value = [](const Point<1>& p) { return 1.0 + 2.0 * p.x[0] - p.y[0] + 0.5 * p.t + p.x[0] * p.y[0]; };
    q.gradient = [](const Point<1>& p) { return SmoothFunction<1>::Gradient{2.0 + p.y[0], -1.0 + p.x[0], 0.5}; };
    q.hessian = [](const Point<1>&) {
        SmoothFunction<1>::Hessian H{};
        H[0][1] = H[1][0] = 1.0;
        return H;
    };
    Point<1> d2;
    d2.x[0] = 0.3;
    d2.y[0] = 0.8;
    d2.t = -0.5;
    CHECK(remainder_order(q, Point<1>{}, d2).exact);
    CHECK_THROWS_AS(remainder_order(q, Point<1>{}, Point<1>{}), DomainError);
}

TEST_CASE("Taylor remainder of smooth bumps decays faster than lambda^2", "[calculus]") {
    DataSpec b;
    b.kind = "gaussian-bump";
    b.width = 0.8;
    const auto u = make_function<1>(b);
    Point<1> xi0;
    xi0.x[0] = 0.2;
    xi0.t = 0.1;
    Point<1> dir;
    dir.x[0] = 0.6;
    dir.y[0] = -0.3;
    dir.t = 0.4;
    const auto r = remainder_order(u, xi0, dir);
    REQUIRE_FALSE(r.exact);
    CHECK(r.slope >= 2.5);
}
