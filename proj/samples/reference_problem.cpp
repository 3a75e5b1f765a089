// Solves the p = 2 reference problem on B_1 for two mesh widths and prints the
// measured Harnack constant next to the weak Harnack constants.

#include <cstdio>

#include <hfrac/hfrac.hpp>

using namespace hfrac;

int main() {
    const FracParams prm{1, 0.5, 2.0};
    DataSpec g{"sign-flip-shell"};
    g.b = 0.5;
    g.r1 = 1.1;
    g.r2 = 1.3;
    g.width = 0.08;
    const auto gf = make_function<1>(g);
    const auto rule = sphere_rule<1>(1024, 7);
    const double r = 1.0 / 6.0, R = 1.0;

    std::printf("%6s %8s %10s %10s %10s %10s %10s\n", "h", "nodes", "sup", "inf", "tail", "c*", "c*(t=1)");
    for (double h : {0.25, 0.125}) {
        auto mesh = std::make_shared<const Mesh<1>>(build_mesh<1>(Point<1>{}, 1.0, h, 1.5));
        const auto P = make_problem<1>(prm, mesh, [](const Point<1>&) { return 0.0; }, gf.value, far_value_of(gf));
        const auto S = solve_linear(P, assemble_kernel(*mesh, prm));
        if (!S.converged) {
            std::fprintf(stderr, "solver did not converge at h=%g\n", h);
            return 3;
        }
        const std::vector<double> f(mesh->n_interior, 0.0);
        const auto H = harnack_constant(S.u, f, prm, Point<1>{}, r, R, rule);
        const auto W = weak_harnack_check(S.u, f, prm, Point<1>{}, r, R, 1.0, rule);
        std::printf("%6.3f %8zu %10.6f %10.6f %10.6f %10.5f %10.5f\n", h, mesh->n_interior, H.sup, H.inf, H.tail,
                    H.c_star, W.c_star);
    }
}
