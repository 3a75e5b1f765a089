#pragma once

#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../data.hpp"
#include "../harnack.hpp"
#include "../nonlocal.hpp"
#include "../solver.hpp"
#include "config.hpp"
#include "output.hpp"

namespace hfrac::cli {

namespace detail {

template <int N>
Point<N> point_from(const std::vector<double>& v) {
    Point<N> p{};
    for (std::size_t k = 0; k < v.size(); ++k) p[static_cast<int>(k)] = v[k];
    return p;
}

template <int N>
std::vector<Column> coord_columns() {
    std::vector<Column> c;
    for (int j = 1; j <= N; ++j) c.push_back({"x" + std::to_string(j), "L"});
    for (int j = 1; j <= N; ++j) c.push_back({"y" + std::to_string(j), "L"});
    c.push_back({"t", "L^2"});
    return c;
}

template <int N>
void push_coords(std::vector<Cell>& row, const Point<N>& p) {
    for (int k = 0; k < 2 * N + 1; ++k) row.emplace_back(p[k]);
}

inline std::vector<double> or_default(std::vector<double> v, double fallback) {
    if (v.empty()) v.push_back(fallback);
    return v;
}

inline double nan() { return std::numeric_limits<double>::quiet_NaN(); }

template <int N>
struct Solved {
    std::shared_ptr<const Mesh<N>> mesh;
    Problem<N> problem;
    DiscreteSolution<N> solution;
    std::string method;
};

template <int N>
Solved<N> solve_config(const RunConfig& cfg, const FracParams& prm, double h) {
    const int T = cfg.integer("threads");
    const Point<N> center = point_from<N>(cfg.list("mesh.center"));
    auto mesh = std::make_shared<const Mesh<N>>(build_mesh<N>(center, cfg.num("mesh.radius"), h, cfg.num("mesh.R_ext")));
    const auto f = make_function<N>(cfg.data("f"));
    const auto g = make_function<N>(cfg.data("g"));
    auto P = make_problem<N>(prm, mesh, f.value, g.value, far_value_of(g));
    KernelOptions ko;
    ko.angular_samples = cfg.values.at("kernel.angular_samples").get<std::size_t>();
    ko.seed = cfg.values.at("seed").get<std::uint64_t>();
    ko.threads = T;
    const PairTable K = assemble_kernel(*mesh, prm, ko);
    std::string method = cfg.str("solver.method");
    if (method == "auto") method = prm.p == 2.0 ? "linear" : "nonlinear";
    DiscreteSolution<N> S;
    if (method == "linear") {
        LinearOptions lo;
        lo.rel_tol = cfg.num("solver.rel_tol");
        lo.max_iter = cfg.integer("solver.max_iter");
        lo.threads = T;
        S = solve_linear(P, K, lo);
    } else {
        NonlinearOptions no;
        no.tol = cfg.num("solver.tol");
        if (cfg.integer("solver.max_iter") > 0) no.max_iter = cfg.integer("solver.max_iter");
        no.threads = T;
        S = solve_nonlinear(P, K, no);
    }
    return {mesh, std::move(P), std::move(S), method};
}

} // namespace detail

template <int N>
void cmd_eval(const RunConfig& cfg) {
    const auto base = cfg.params();
    const auto quad = cfg.quad();
    const auto u = make_function<N>(cfg.data("u"));
    std::vector<Point<N>> pts;
    for (const auto& p : cfg.at("points")) pts.push_back(detail::point_from<N>(p.get<std::vector<double>>()));
    if (pts.empty()) pts.push_back(Point<N>{});
    Table t{"eval", detail::coord_columns<N>(), {}};
    for (const Column& c : std::vector<Column>{{"s", "1"},
                                                {"p", "1"},
                                                {"value", "U^(p-1) L^(-sp)"},
                                                {"quad_error", "U^(p-1) L^(-sp)"},
                                                {"frac_value", "U L^(-2s)"},
                                                {"frac_error", "U L^(-2s)"},
                                                {"C_times_value", "U L^(-2s)"}})
        t.columns.push_back(c);
    for (double s : detail::or_default(cfg.list("s_list"), base.s)) {
        FracParams prm = base;
        prm.s = s;
        prm.validate();
        const double C = prm.p == 2.0 ? frac_constant<N>(s, quad) : detail::nan();
        for (const auto& xi : pts) {
            const auto e = p_operator(u, xi, prm, quad);
            std::vector<Cell> row;
            detail::push_coords(row, xi);
            row.emplace_back(s);
            row.emplace_back(prm.p);
            row.emplace_back(e.value);
            row.emplace_back(e.error);
            if (prm.p == 2.0) {
                const auto fr = frac_sublaplacian(u, xi, prm, quad);
                row.emplace_back(fr.value);
                row.emplace_back(fr.error);
                row.emplace_back(C * e.value);
            } else {
                row.emplace_back(std::monostate{});
                row.emplace_back(std::monostate{});
                row.emplace_back(std::monostate{});
            }
            t.add(std::move(row));
        }
    }
    write_table(cfg, t);
}

template <int N>
void cmd_solve(const RunConfig& cfg) {
    const auto prm = cfg.params();
    auto r = detail::solve_config<N>(cfg, prm, cfg.num("mesh.h"));
    const auto& S = r.solution;
    const auto& m = *r.mesh;

    Table sol{"solution", detail::coord_columns<N>(), {}};
    sol.columns.insert(sol.columns.begin(), {{"node", "1"}, {"interior", "1"}});
    sol.columns.push_back({"value", "U"});
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<Cell> row{static_cast<long long>(i), static_cast<long long>(m.is_interior(i) ? 1 : 0)};
        detail::push_coords(row, m.nodes[i]);
        row.emplace_back(S.u.values[i]);
        sol.add(std::move(row));
    }
    write_table(cfg, sol);

    Table log{"convergence", {{"iteration", "1"}, {"energy", "U^p L^(Q-sp)"}}, {}};
    for (std::size_t k = 0; k < S.energy_log.size(); ++k)
        log.add({static_cast<long long>(k), S.energy_log[k]});
    write_table(cfg, log);

    double sup = -std::numeric_limits<double>::infinity(), inf = std::numeric_limits<double>::infinity();
    for (double v : S.interior()) {
        sup = std::max(sup, v);
        inf = std::min(inf, v);
    }
    Table sum{"summary",
              {{"method", "1"},
               {"h", "L"},
               {"n_interior", "1"},
               {"n_exterior", "1"},
               {"iterations", "1"},
               {"converged", "1"},
               {"residual", "U^(p-1) L^(-sp)"},
               {"energy", "U^p L^(Q-sp)"},
               {"m_matrix", "1"},
               {"interior_sup", "U"},
               {"interior_inf", "U"}},
              {}};
    sum.add({r.method, m.h, static_cast<long long>(m.n_interior), static_cast<long long>(m.n_exterior()),
             static_cast<long long>(S.iterations), static_cast<long long>(S.converged ? 1 : 0), S.residual, S.energy,
             static_cast<long long>(r.method == "linear" ? (S.m_matrix ? 1 : 0) : -1), sup, inf});
    write_table(cfg, sum);
    if (!S.converged) throw ConvergenceError("solver did not converge");
}

inline std::vector<Column> harnack_columns() {
    return {{"check", "1"},  {"h", "L"},          {"s", "1"},       {"p", "1"},           {"r", "L"},
            {"R", "L"},      {"t", "1"},          {"delta", "1"},   {"q", "1"},           {"d", "U"},
            {"lhs", "*"},    {"rhs_unit", "*"},   {"sup", "U"},     {"inf", "U"},         {"tail", "U"},
            {"f_norm", "U^(p-1) L^(-sp)"},        {"chi", "U"},     {"c_star", "1"},      {"c_main", "1"},
            {"c_tail", "1"}, {"c_f", "1"},        {"delta_measured", "1"},                {"delta_formula", "1"},
            {"regime", "1"}};
}

struct HarnackRow {
    std::string check;
    double h = 0, s = 0, p = 0, r = 0, R = 0;
    double t = detail::nan(), delta = detail::nan(), q = detail::nan(), d = detail::nan();
    double lhs = 0, rhs_unit = 0, sup = detail::nan(), inf = detail::nan(), tail = detail::nan();
    double f_norm = detail::nan(), chi = detail::nan(), c_star = 0;
    double c_main = detail::nan(), c_tail = detail::nan(), c_f = detail::nan();
    double delta_measured = detail::nan(), delta_formula = detail::nan();
    std::string regime;

    std::vector<Cell> cells() const {
        auto opt = [](double v) -> Cell { return std::isnan(v) ? Cell{} : Cell{v}; };
        return {check, h, s, p, r, R, opt(t), opt(delta), opt(q), opt(d), lhs, rhs_unit, opt(sup), opt(inf),
                opt(tail), opt(f_norm), opt(chi), c_star, opt(c_main), opt(c_tail), opt(c_f),
                opt(delta_measured), opt(delta_formula), regime};
    }
};

template <int N>
std::vector<HarnackRow> harnack_rows(const RunConfig& cfg, const FracParams& prm, const DiscreteFunction<N>& u,
                                     const std::vector<double>& f) {
    const Point<N> xi0 = detail::point_from<N>(cfg.list("harnack.xi0"));
    const double r = cfg.num("harnack.r"), R = cfg.num("harnack.R");
    const auto rule = sphere_rule<N>(cfg.values.at("kernel.angular_samples").get<std::size_t>(),
                                     mix_seed(cfg.values.at("seed").get<std::uint64_t>(), kTagHarness));
    std::vector<HarnackRow> rows;
    auto base = [&](const std::string& check, double rr) {
        HarnackRow w;
        w.check = check;
        w.h = u.grid().h;
        w.s = prm.s;
        w.p = prm.p;
        w.r = rr;
        w.R = R;
        w.regime = to_string(prm.regime());
        return w;
    };
    auto from_report = [&](HarnackRow w, const HarnackReport& rep) {
        w.lhs = rep.lhs;
        w.rhs_unit = rep.term_main + rep.term_tail + rep.term_f;
        w.sup = rep.sup;
        w.inf = rep.inf;
        w.tail = rep.tail;
        w.f_norm = rep.f_norm;
        w.chi = rep.chi;
        w.c_star = rep.c_star;
        w.c_main = rep.c_main;
        w.c_tail = rep.c_tail;
        w.c_f = rep.c_f;
        return w;
    };
    for (const auto& entry : cfg.at("harnack.checks")) {
        const std::string check = entry.get<std::string>();
        if (check == "harnack") {
            rows.push_back(from_report(base(check, r), harnack_constant(u, f, prm, xi0, r, R, rule)));
        } else if (check == "weak_harnack") {
            for (double t : cfg.list("t_list")) {
                auto w = from_report(base(check, r), weak_harnack_check(u, f, prm, xi0, r, R, t, rule));
                w.t = t;
                rows.push_back(w);
            }
        } else if (check == "tail_control") {
            const auto tc = tail_control_check(u, f, prm, xi0, r, R, rule);
            auto w = base(check, r);
            w.lhs = tc.lhs_tail;
            w.rhs_unit = tc.rhs_unit;
            w.sup = tc.sup;
            w.c_star = tc.c_star;
            rows.push_back(w);
        } else if (check == "boundedness") {
            for (double delta : cfg.list("delta_list")) {
                const auto b = boundedness_check(u, prm, xi0, R, delta, rule);
                auto w = base(check, R);
                w.delta = delta;
                w.lhs = b.lhs;
                w.rhs_unit = b.rhs;
                w.sup = b.lhs;
                w.tail = b.tail_plus;
                w.c_star = b.c_min;
                rows.push_back(w);
            }
        } else if (check == "caccioppoli") {
            const double q = cfg.num("harnack.q"), d = cfg.num("harnack.d");
            const auto c = caccioppoli_check(u, f, prm, xi0, R, R, q, d, Cutoff{}, rule, std::nullopt,
                                             cfg.integer("threads"));
            auto w = base(check, R);
            w.q = q;
            w.d = d;
            w.lhs = c.lhs;
            w.rhs_unit = c.rhs_unit;
            w.c_star = c.c_star;
            rows.push_back(w);
        } else if (check == "positivity") {
            const double rp = R / 8.0;
            double k;
            if (cfg.at("harnack.k").is_null()) {
                k = std::numeric_limits<double>::infinity();
                for (std::size_t i : hfrac::detail::ball_nodes(u.grid(), xi0, 6.0 * rp, false))
                    k = std::min(k, u.values[i]);
            } else {
                k = cfg.num("harnack.k");
            }
            const double sigma = cfg.num("harnack.sigma"), delta = cfg.num("harnack.delta");
            const auto pe = positivity_expansion_check(u, f, prm, xi0, rp, R, k, sigma, delta, rule);
            auto w = base(check, rp);
            w.delta = delta;
            w.lhs = pe.lhs_measure;
            w.rhs_unit = pe.bound;
            w.inf = pe.inf_4r;
            w.tail = pe.tail_term;
            w.c_star = pe.c_bar;
            w.delta_measured = pe.delta_measured;
            w.delta_formula = pe.delta_formula;
            rows.push_back(w);
        }
    }
    return rows;
}

template <int N>
void cmd_harnack(const RunConfig& cfg) {
    const auto base = cfg.params();
    Table t{"harnack", harnack_columns(), {}};
    for (double h : detail::or_default(cfg.list("h_list"), cfg.num("mesh.h")))
        for (double s : detail::or_default(cfg.list("s_list"), base.s)) {
            FracParams prm = base;
            prm.s = s;
            prm.validate();
            auto r = detail::solve_config<N>(cfg, prm, h);
            if (!r.solution.converged) throw ConvergenceError("solver did not converge");
            for (const auto& row : harnack_rows<N>(cfg, prm, r.solution.u, r.problem.f)) t.add(row.cells());
        }
    write_table(cfg, t);
}

template <int N>
void cmd_asymptotics(const RunConfig& cfg) {
    const auto quad = cfg.quad();
    const auto u = make_function<N>(cfg.data("u"));
    Point<N> xi{};
    if (!cfg.at("points").empty()) xi = detail::point_from<N>(cfg.at("points")[0].get<std::vector<double>>());
    Table a{"asymptotics",
            {{"s", "1"}, {"frac_value", "U L^-2"}, {"quad_error", "U L^-2"}, {"limit_value", "U L^-2"}, {"abs_error", "U L^-2"}},
            {}};
    for (const auto& row : asymptotics_sweep(u, xi, cfg.list("asymptotics.s_list"), quad))
        a.add({row.s, row.frac_value, row.quad_error, row.limit_value, row.abs_error});
    write_table(cfg, a);

    const auto s_list = cfg.list("robustness.s_list");
    if (s_list.empty()) return;
    const auto base = cfg.params();
    const int T = cfg.integer("threads");
    const Point<N> center = detail::point_from<N>(cfg.list("mesh.center"));
    auto mesh = std::make_shared<const Mesh<N>>(
        build_mesh<N>(center, cfg.num("mesh.radius"), cfg.num("mesh.h"), cfg.num("mesh.R_ext")));
    const auto f = make_function<N>(cfg.data("f"));
    const auto g = make_function<N>(cfg.data("g"));
    auto make = [&](double s) {
        FracParams prm = base;
        prm.s = s;
        return make_problem<N>(prm, mesh, f.value, g.value, far_value_of(g));
    };
    KernelOptions ko;
    ko.angular_samples = cfg.values.at("kernel.angular_samples").get<std::size_t>();
    ko.seed = cfg.values.at("seed").get<std::uint64_t>();
    ko.threads = T;
    LinearOptions lo;
    lo.rel_tol = cfg.num("solver.rel_tol");
    lo.max_iter = cfg.integer("solver.max_iter");
    lo.threads = T;
    const auto rule = sphere_rule<N>(ko.angular_samples, mix_seed(ko.seed, kTagHarness));
    const auto rows = robustness_sweep<N>(make, s_list, detail::point_from<N>(cfg.list("harnack.xi0")),
                                          cfg.num("harnack.r"), cfg.num("harnack.R"), cfg.list("t_list").at(0), rule,
                                          ko, lo);
    Table rb{"robustness",
             {{"s", "1"},
              {"tail", "U"},
              {"tail_coefficient", "1"},
              {"weighted_tail", "U"},
              {"c_star", "1"},
              {"c_star_weak", "1"},
              {"sup", "U"},
              {"inf", "U"},
              {"t_mean", "U"},
              {"inf_3r2", "U"}},
             {}};
    for (const auto& r : rows)
        rb.add({r.s, r.tail, r.tail_coefficient, r.weighted_tail, r.c_star_harnack, r.c_star_weak, r.sup, r.inf,
                r.t_mean, r.inf_15});
    write_table(cfg, rb);
}

inline int exit_code_for(const std::string& code) {
    if (code == "convergence" || code == "unverifiable") return 3;
    if (code == "geometry") return 4;
    return 2;
}

inline void report_error(std::ostream& err, const std::string& code, int exit_code, const std::string& what) {
    std::string msg;
    for (char c : what) msg += (c == '\n' || c == '\r') ? ' ' : c;
    err << "hfrac: error code=" << code << " exit=" << exit_code << " message=" << json(msg).dump() << "\n";
}

template <int N>
void dispatch(const RunConfig& cfg) {
    if (cfg.command == "eval") cmd_eval<N>(cfg);
    else if (cfg.command == "solve") cmd_solve<N>(cfg);
    else if (cfg.command == "harnack") cmd_harnack<N>(cfg);
    else cmd_asymptotics<N>(cfg);
}

inline int run(int argc, const char* const* argv, std::ostream& err = std::cerr) {
    CLI::App app{"Fractional operators and Harnack-type estimates on the Heisenberg group", "hfrac"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    const std::pair<const char*, const char*> subs[] = {
        {"eval", "evaluate the nonlocal operators of u at the given points"},
        {"solve", "solve the discrete Dirichlet problem on the ball"},
        {"harnack", "solve, then measure the Harnack-type constants"},
        {"asymptotics", "limit s -> 1 of the fractional sublaplacian; optional sweep in s"}};
    for (const auto& [name, help] : subs) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--threads", threads, "worker threads");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        report_error(err, "config", 2, e.what());
        return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        std::map<std::string, json> flags;
        if (seed) flags["seed"] = *seed;
        if (threads) flags["threads"] = *threads;
        const RunConfig cfg = load_config(command, config_path, flags, out_dir);
        if (cfg.integer("n") == 1) dispatch<1>(cfg);
        else dispatch<2>(cfg);
    } catch (const Error& e) {
        const int ec = exit_code_for(e.code());
        report_error(err, e.code(), ec, e.what());
        return ec;
    } catch (const json::exception& e) {
        report_error(err, "config", 2, e.what());
        return 2;
    } catch (const std::exception& e) {
        report_error(err, "internal", 1, e.what());
        return 1;
    }
    return 0;
}

} // namespace hfrac::cli
