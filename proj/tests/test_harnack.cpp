#include <catch_amalgamated.hpp>

#include <hfrac/data.hpp>
#include <hfrac/harnack.hpp>
#include <hfrac/iteration.hpp>

using namespace hfrac;
using Catch::Approx;

namespace {

struct Fixture {
    std::shared_ptr<const Mesh<1>> mesh = std::make_shared<const Mesh<1>>(build_mesh<1>(Point<1>{}, 1.0, 0.25, 1.5));
    FracParams prm{1, 0.5, 2.0};
    SphereRule<1> rule = sphere_rule<1>(512, 9);
    std::vector<double> f = std::vector<double>(mesh->n_interior, 0.0);

    DiscreteFunction<1> solve(const DataSpec& g) const {
        const auto gf = make_function<1>(g);
        const auto P = make_problem<1>(prm, mesh, [](const Point<1>&) { return 0.0; }, gf.value, far_value_of(gf));
        return solve_linear(P, assemble_kernel(*mesh, prm)).u;
    }
};

DataSpec shell(double b) {
    DataSpec g{"sign-flip-shell"};
    g.b = b;
    g.width = 0.1;
    g.r2 = 1.35;
    return g;
}

} // namespace

TEST_CASE("ball statistics and power means", "[harnack]") {
    Fixture F;
    const auto u = sample<1>(F.mesh, [](const Point<1>& x) { return 1.0 + x.x[0] + 0.5 * x.t; }, 1.0);
    const auto b = ball_stats(u, Point<1>{}, 0.6, {0.0, 0.5, 1.0, 2.0});
    CHECK(b.count > 1);
    CHECK(b.inf <= b.means[0]);
    for (std::size_t k = 1; k < b.means.size(); ++k) CHECK(b.means[k - 1] <= b.means[k] + 1e-15);
    CHECK(b.means.back() <= b.sup);
    Point<1> gap;
    gap.x[0] = 0.1;
    gap.y[0] = 0.1;
    gap.t = 0.013;
    CHECK_THROWS_AS(ball_stats(u, gap, 1e-3, {}), DomainError);
    const auto neg = sample<1>(F.mesh, [](const Point<1>& x) { return x.x[0]; }, 0.0);
    CHECK_THROWS_AS(ball_stats(neg, Point<1>{}, 0.6, {0.5}), DomainError);
}

TEST_CASE("geometry guards", "[harnack]") {
    Fixture F;
    const auto u = F.solve(shell(0.0));
    CHECK_THROWS_AS(harnack_constant(u, F.f, F.prm, Point<1>{}, 0.2, 1.0, F.rule), GeometryError);
    Point<1> off;
    off.x[0] = 0.3;
    CHECK_THROWS_AS(harnack_constant(u, F.f, F.prm, off, 0.1, 0.9, F.rule), GeometryError);
    CHECK_THROWS_AS(positivity_expansion_check(u, F.f, F.prm, Point<1>{}, 1.0 / 6.0, 1.0, 0.1, 0.5, 0.1, F.rule),
                    GeometryError);
    CHECK_THROWS_AS(caccioppoli_check(u, F.f, F.prm, Point<1>{}, 1.0, 1.0, 2.5, 0.1, Cutoff{}, F.rule), DomainError);
}

TEST_CASE("nonnegative data give a zero tail column", "[harnack]") {
    Fixture F;
    const auto u = F.solve(shell(0.0));
    const auto r = harnack_constant(u, F.f, F.prm, Point<1>{}, 1.0 / 6.0, 1.0, F.rule);
    CHECK(r.tail == 0.0);
    CHECK(r.term_tail == 0.0);
    CHECK(std::isfinite(r.c_star));
    CHECK(r.c_star >= 1.0);
    const auto s = F.solve(shell(0.5));
    const auto rs = harnack_constant(s, F.f, F.prm, Point<1>{}, 1.0 / 6.0, 1.0, F.rule);
    CHECK(rs.tail > 0.0);
    CHECK(rs.lhs <= rs.c_star * (rs.term_main + rs.term_tail + rs.term_f) * (1.0 + 1e-12));
}

TEST_CASE("chi term", "[harnack]") {
    const FracParams prm{1, 0.5, 2.0};
    CHECK(chi_term(prm, 0.5, 0.0, 1.0) == 0.0);
    // r^{Qsp/(t(Q-sp))} f^{Q/(t(Q-sp))} with Q = 4, sp = 1, t = 1
    CHECK(chi_term(prm, 0.5, 2.0, 1.0) == Approx(std::pow(0.5, 4.0 / 3.0) * std::pow(2.0, 4.0 / 3.0)));
    CHECK_THROWS_AS(chi_term(prm, 0.5, 1.0, 4.0 / 3.0), DomainError);
    FracParams sup{1, 0.9, 5.0};
    CHECK_THROWS_AS(chi_term(sup, 0.5, 1.0, 1.0), DomainError);
    sup.epsilon = 0.3;
    // r^{Q(s-e)/(t e)} f^{s/(t e)}
    CHECK(chi_term(sup, 0.5, 2.0, 1.0) == Approx(std::pow(0.5, 4.0 * 0.6 / 0.3) * std::pow(2.0, 0.9 / 0.3)));
}

TEST_CASE("Caccioppoli and boundedness terms", "[harnack]") {
    Fixture F;
    const auto u = F.solve(shell(0.0));
    const auto c = caccioppoli_check(u, F.f, F.prm, Point<1>{}, 1.0, 1.0, 1.5, 0.05, Cutoff{}, F.rule);
    CHECK(c.lhs > 0.0);
    CHECK(c.tail_factor == 0.0);
    CHECK(c.load_term == 0.0);
    CHECK(c.ratio == Approx(1.0));
    const auto c2 = caccioppoli_check(u, F.f, F.prm, Point<1>{}, 1.0, 1.0, 1.5, 0.05, Cutoff{}, F.rule, 2.0 * c.c_star);
    CHECK(c2.ratio == Approx(0.5));

    const auto b = boundedness_check(u, F.prm, Point<1>{}, 1.0, 0.5, F.rule);
    CHECK(b.ok);
    CHECK(b.gamma == Approx(1.0 * 4.0 / (0.5 * 4.0)));
    CHECK(b.c_min >= 0.0);
    const auto b2 = boundedness_check(u, F.prm, Point<1>{}, 1.0, 0.01, F.rule);
    CHECK(b2.c_min > 0.0);
    CHECK(b2.ok);
    CHECK_FALSE(boundedness_check(u, F.prm, Point<1>{}, 1.0, 0.01, F.rule, 0.5 * b2.c_min).ok);

    Cutoff phi;
    CHECK(phi(0.3) == 1.0);
    CHECK(phi(0.8) == 0.0);
    CHECK(phi(0.6) > 0.0);
    CHECK(phi(0.6) < 1.0);
}

TEST_CASE("positivity expansion and tail control", "[harnack]") {
    Fixture F;
    const auto u = F.solve(shell(0.5));
    const double R = 1.0, r = R / 8.0;
    CHECK_THROWS_AS(positivity_expansion_check(u, F.f, F.prm, Point<1>{}, r, R, 10.0, 0.5, 0.1, F.rule), DomainError);
    const auto pe = positivity_expansion_check(u, F.f, F.prm, Point<1>{}, r, R, 0.05, 0.5, 0.1, F.rule);
    CHECK(pe.ok);
    CHECK(pe.delta_measured > 0.0);
    CHECK(pe.delta_formula > 0.0);
    CHECK(pe.delta_formula <= 0.25);
    const auto tc = tail_control_check(u, F.f, F.prm, Point<1>{}, 1.0 / 6.0, 1.0, F.rule);
    CHECK(tc.lhs_tail > 0.0);
    CHECK(std::isfinite(tc.c_star));
}

TEST_CASE("geometric iteration lemma", "[harnack][iteration]") {
    std::vector<double> A;
    for (int j = 0; j <= 10; ++j) A.push_back(0.5 * std::ldexp(1.0, -j));
    const auto g = iter_lemma_geometric(1.0, 2.0, 1.0, A);
    CHECK(g.threshold == Approx(0.5).epsilon(1e-15));
    CHECK(g.hypothesis_ok);
    CHECK(g.bounds_hold);
    for (int j = 0; j <= 10; ++j) CHECK(g.bounds[j] == A[j]);
    std::vector<double> big{0.6, 0.3};
    CHECK_FALSE(iter_lemma_geometric(1.0, 2.0, 1.0, big).hypothesis_ok);
    CHECK_THROWS_AS(iter_lemma_geometric(1.0, 1.0, 1.0, A), DomainError);
}

TEST_CASE("interpolation iteration lemma", "[harnack][iteration]") {
    std::vector<double> ts{0.0, 0.25, 0.5, 0.75, 1.0}, g(5, 2.0);
    // constant g: premise g <= c2 + zeta g holds with c2 = (1 - zeta) g
    const auto r = iter_lemma_interpolation(ts, g, 0.0, 1.0, 1.0, 0.5);
    CHECK(r.premise_ok);
    CHECK(r.rho_bound_ok);
    CHECK(r.c * 1.0 >= 2.0 * (1.0 - 1e-12));
    CHECK(interpolation_constant(0.0, 0.5) == Approx(2.0));
    CHECK(interpolation_constant(2.0, 0.0) == 1.0);
    CHECK_THROWS_AS(interpolation_constant(1.0, 1.0), DomainError);
}
