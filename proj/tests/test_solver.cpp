#include <catch_amalgamated.hpp>

#include <hfrac/data.hpp>
#include <hfrac/discrete.hpp>
#include <hfrac/solver.hpp>

using namespace hfrac;
using Catch::Approx;

namespace {

std::shared_ptr<const Mesh<1>> small_mesh(double h = 0.3) {
    return std::make_shared<const Mesh<1>>(build_mesh<1>(Point<1>{}, 1.0, h, 1.5));
}

auto zero = [](const Point<1>&) { return 0.0; };

} // namespace

TEST_CASE("mesh layout", "[solver]") {
    const auto m = small_mesh();
    CHECK_NOTHROW(m->validate());
    CHECK(m->n_interior > 0);
    CHECK(m->n_exterior() > 0);
    for (std::size_t i = 0; i < m->size(); ++i) CHECK((m->level(i) < 1.0) == m->is_interior(i));
    const auto flat = build_mesh<1>(Point<1>{}, 1.0, 0.3, 1.0);
    CHECK(flat.n_exterior() == 0);
    CHECK_THROWS_AS(build_mesh<1>(Point<1>{}, 1.0, 0.3, 0.9), DomainError);
    CHECK_THROWS_AS(build_mesh<1>(Point<1>{}, 1.0, 0.0, 1.5), DomainError);
}

TEST_CASE("constant data reproduce the constant", "[solver]") {
    const auto m = small_mesh();
    for (double p : {2.0, 3.0, 1.5}) {
        const FracParams prm{1, 0.5, p};
        const auto P = make_problem<1>(prm, m, zero, [](const Point<1>&) { return 0.7; }, 0.7);
        const auto K = assemble_kernel(*m, prm);
        const auto S = p == 2.0 ? solve_linear(P, K) : solve_nonlinear(P, K);
        CHECK(S.converged);
        for (double v : S.interior()) CHECK(v == Approx(0.7).epsilon(1e-14));
    }
}

TEST_CASE("kernel gives an M-matrix and the maximum principle holds", "[solver]") {
    const auto m = small_mesh();
    const FracParams prm{1, 0.6, 2.0};
    const auto K = assemble_kernel(*m, prm);
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> gv(m->n_exterior());
        for (auto& v : gv) v = rng.uniform(-1.0, 2.0);
        const double gfar = rng.uniform(-1.0, 2.0);
        Problem<1> P{prm, m, std::vector<double>(m->n_interior, 0.0), gv, gfar,
                     std::vector<double>(m->n_interior, 0.0)};
        const auto S = solve_linear(P, K);
        CHECK(S.m_matrix);
        CHECK(S.converged);
        const double lo = std::min(*std::min_element(gv.begin(), gv.end()), gfar);
        const double hi = std::max(*std::max_element(gv.begin(), gv.end()), gfar);
        for (double v : S.interior()) {
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
    }
}

TEST_CASE("energy gradient matches central differences", "[solver]") {
    const auto m = small_mesh(0.35);
    DataSpec g{"sign-flip-shell"};
    g.width = 0.1;
    const auto gf = make_function<1>(g);
    for (double p : {1.5, 2.0, 3.0}) {
        const FracParams prm{1, 0.5, p};
        const auto P = make_problem<1>(prm, m, [](const Point<1>& x) { return 1.0 + x.x[0]; }, gf.value, 0.0);
        const auto K = assemble_kernel(*m, prm);
        Rng rng(3);
        std::vector<double> u(m->n_interior);
        for (auto& v : u) v = rng.uniform(-0.5, 0.5);
        const auto G = energy_gradient<1>(u, P, K);
        for (std::size_t i = 0; i < u.size(); i += 7) {
            const double h = 1e-5;
            auto up = u, um = u;
            up[i] += h;
            um[i] -= h;
            const double fd = (energy<1>(up, P, K) - energy<1>(um, P, K)) / (2.0 * h);
            CHECK(fd == Approx(G[i]).epsilon(1e-6).margin(1e-9));
        }
    }
}

TEST_CASE("linear and nonlinear solvers agree at p = 2", "[solver]") {
    const auto m = small_mesh();
    const FracParams prm{1, 0.5, 2.0};
    DataSpec g{"sign-flip-shell"};
    g.width = 0.08;
    const auto gf = make_function<1>(g);
    const auto P = make_problem<1>(prm, m, zero, gf.value, 0.0);
    const auto K = assemble_kernel(*m, prm);
    const auto A = solve_linear(P, K);
    const auto B = solve_nonlinear(P, K);
    REQUIRE(A.converged);
    REQUIRE(B.converged);
    double d = 0.0;
    for (std::size_t i = 0; i < m->n_interior; ++i) d = std::max(d, std::abs(A.u.values[i] - B.u.values[i]));
    CHECK(d < 1e-6);
    CHECK(A.residual < 1e-8);
}

TEST_CASE("nonlinear energy decreases monotonically", "[solver]") {
    const auto m = small_mesh();
    const FracParams prm{1, 0.5, 3.0};
    DataSpec g{"sign-flip-shell"};
    const auto gf = make_function<1>(g);
    const auto P = make_problem<1>(prm, m, zero, gf.value, 0.0);
    const auto S = solve_nonlinear(P, assemble_kernel(*m, prm));
    CHECK(S.converged);
    for (std::size_t k = 1; k < S.energy_log.size(); ++k) CHECK(S.energy_log[k] <= S.energy_log[k - 1]);
}

TEST_CASE("discrete tail and Sobolev ratio", "[solver]") {
    const auto m = small_mesh();
    const FracParams prm{1, 0.5, 2.0};
    const auto one = sample<1>(m, [](const Point<1>&) { return 1.0; }, 1.0);
    const auto rule = sphere_rule<1>(2048, 5);
    // nodes cover B_{1.5}; beyond that the far value is integrated exactly
    const double T = tail(one, Point<1>{}, 1.0, prm, rule);
    CHECK(T == Approx(std::numbers::pi * std::numbers::pi / 0.5).epsilon(0.1));
    const auto pos = sample<1>(m, [](const Point<1>& x) { return -x.x[0]; }, 0.0);
    CHECK(tail(pos, Point<1>{}, 1.0, prm, rule, Part::positive) > 0.0);
    const auto nonneg = sample<1>(m, [](const Point<1>& x) { return x.z_norm2(); }, 0.0);
    CHECK(tail(nonneg, Point<1>{}, 1.0, prm, rule, Part::negative) == 0.0);

    const auto bump = sample<1>(m, [](const Point<1>& x) { return std::max(0.0, 1.0 - koranyi_norm(x)); }, 0.0);
    const auto sc = sobolev_check(bump, prm);
    CHECK_FALSE(sc.degenerate);
    CHECK(std::isfinite(sc.ratio));
    CHECK(sc.ratio > 0.0);
    CHECK_THROWS_AS(sobolev_check(one, prm), DomainError);
}
