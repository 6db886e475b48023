#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "omlab/bellman.hpp"
#include "omlab/laguerre.hpp"
#include "omlab/lift.hpp"
#include "omlab/martingale.hpp"

namespace py = pybind11;

namespace {

using omlab::ConjugatePair;
using omlab::Vec2;

py::dict point_dict(const omlab::bellman::BellmanPoint& pt) {
    py::dict d;
    d["u"] = pt.u;
    d["v"] = pt.v;
    d["t"] = pt.t;
    d["B"] = pt.value;
    d["B_u"] = pt.b_u;
    d["B_v"] = pt.b_v;
    d["B_uu"] = pt.b_uu;
    d["B_vv"] = pt.b_vv;
    d["B_uv_shifted"] = pt.b_uv_shifted;
    d["shift"] = pt.shift;
    d["S"] = pt.S;
    d["alpha"] = pt.alpha;
    d["beta"] = pt.beta;
    d["tau"] = pt.tau;
    d["det_residual"] = omlab::bellman::det_residual_rel(pt);
    return d;
}

py::dict pogorelov_dict(const omlab::bellman::PogorelovSolution& sol) {
    py::dict d;
    d["branch"] = std::string(1, sol.branch);
    d["p"] = sol.p;
    d["q"] = sol.q;
    d["C1"] = sol.C1;
    d["C2"] = sol.C2;
    d["gamma"] = sol.gamma;
    d["a"] = sol.a;
    d["b"] = sol.b;
    d["improvement_c"] = sol.improvement_c;
    return d;
}

py::dict certificate_dict(const omlab::lift::CertificateTerms& t) {
    py::dict d;
    d["term_tau"] = t.term_tau;
    d["term_inv_tau"] = t.term_inv_tau;
    d["term_rotational"] = t.term_rotational;
    d["term_square"] = t.term_square;
    d["total"] = t.total;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "core numerics: Laguerre roots, Bellman surfaces, Hessian "
              "certificates, martingale experiments";

    m.def("laguerre_eval", &omlab::laguerre::eval, py::arg("p"), py::arg("s"),
          "bounded Laguerre-type function L_p(s)");

    m.def(
        "laguerre_solve",
        [](double p) {
            const auto sol = omlab::laguerre::solve(p);
            py::dict d;
            d["p"] = sol.p;
            d["z_p"] = sol.z_p;
            d["c_left"] = sol.c_left;
            d["c_right"] = sol.c_right;
            return d;
        },
        py::arg("p"), "least positive root of L_p with both constant legs");

    m.def(
        "burkholder_constants",
        [](double exponent) {
            const auto pair = ConjugatePair::from_either(exponent);
            const auto bc = omlab::laguerre::burkholder_constants(pair);
            return py::make_tuple(bc.p_leg, bc.q_leg);
        },
        py::arg("exponent"),
        "martingale-comparison constants (sqrt((p^2-p)/2), sqrt(2/(q^2-q)))");

    m.def(
        "solve_t",
        [](double p, double u, double v) {
            return omlab::bellman::solve_t(ConjugatePair::from_p(p), u, v);
        },
        py::arg("p"), py::arg("u"), py::arg("v"),
        "implicit surface parameter t(u, v)");

    m.def(
        "eval_bellman",
        [](double p, double u, double v) {
            return point_dict(
                omlab::bellman::eval_bellman(ConjugatePair::from_p(p), u, v));
        },
        py::arg("p"), py::arg("u"), py::arg("v"),
        "implicit Bellman surface point with gradient/Hessian data");

    m.def("closed_p3_plus", &omlab::bellman::eval_closed_p3_plus, py::arg("u"),
          py::arg("v"), "p = 3 closed form (2/9)((u^2+3v)^{3/2}+|u|^3)");

    m.def(
        "pogorelov",
        [](double p, const std::string& branch) {
            const auto pair = ConjugatePair::from_p(p);
            if (branch == "plus")
                return pogorelov_dict(omlab::bellman::solve_pogorelov_plus(pair));
            if (branch == "minus")
                return pogorelov_dict(omlab::bellman::solve_pogorelov_minus(pair));
            throw std::invalid_argument("branch must be 'plus' or 'minus'");
        },
        py::arg("p"), py::arg("branch"),
        "boundary-system solution constants for either branch");

    m.def(
        "closed_p3_minus",
        [](double u, double v) {
            const auto sol = omlab::bellman::solve_pogorelov_minus(
                ConjugatePair::from_p(3.0));
            return point_dict(omlab::bellman::eval_closed_p3_minus(u, v, sol));
        },
        py::arg("u"), py::arg("v"),
        "boundary-improved p = 3 surface point");

    m.def(
        "decompose_form",
        [](double A, double B, double C) {
            const auto d = omlab::lift::decompose_form(A, B, C);
            py::dict out;
            out["A"] = d.A;
            out["B"] = d.B;
            out["C"] = d.C;
            out["D"] = d.D;
            out["tau"] = d.tau;
            return out;
        },
        py::arg("A"), py::arg("B"), py::arg("C"),
        "positive split of A x^2 + 2Bxy + C y^2 with D = sqrt(AC) - |B|");

    m.def(
        "certificate_p3",
        [](const Vec2& y1, const Vec2& y2, const Vec2& dy1, const Vec2& dy2) {
            return certificate_dict(omlab::lift::certificate_p3(y1, y2, dy1, dy2));
        },
        py::arg("y1"), py::arg("y2"), py::arg("dy1"), py::arg("dy2"),
        "four-term sum-of-squares certificate at p = 3");

    m.def(
        "tau_condition_min_slack",
        [](const std::string& branch, int grid) {
            const char b = branch == "minus" ? '-' : '+';
            const auto rep = omlab::lift::check_tau_condition(b, grid);
            py::dict d;
            d["min_slack"] = rep.min_slack;
            d["at_x1"] = rep.at_x1;
            d["at_x2"] = rep.at_x2;
            return d;
        },
        py::arg("branch") = "plus", py::arg("grid") = 32,
        "grid minimum of the rotational-coefficient slack");

    m.def(
        "transform_lemmas",
        [](std::uint64_t seed, long n_draws) {
            const auto rep = omlab::mart::check_transform_lemmas(seed, n_draws);
            py::dict d;
            d["n_draws"] = rep.n_draws;
            d["max_abs_dot"] = rep.max_abs_dot;
            d["max_bracket_ratio"] = rep.max_bracket_ratio;
            return d;
        },
        py::arg("seed") = 1, py::arg("n_draws") = 100000,
        "difference-transform orthogonality and bracket-domination check");

    m.def(
        "experiment",
        [](double q, int paths, int steps, double dt, std::uint64_t seed,
           const std::string& construction) {
            omlab::mart::MartingaleSpec spec;
            spec.q = q;
            spec.paths = paths;
            spec.steps = steps;
            spec.dt = dt;
            spec.seed = seed;
            spec.construction = construction;
            const auto rep = omlab::mart::inequality_experiment(spec);
            py::dict d;
            d["ratio"] = rep.ratio;
            d["bound"] = rep.bound;
            d["margin"] = rep.margin;
            d["std_error"] = rep.std_error;
            return d;
        },
        py::arg("q") = 1.5, py::arg("paths") = 10000, py::arg("steps") = 1000,
        py::arg("dt") = 1e-3, py::arg("seed") = 1,
        py::arg("construction") = "rotation",
        "Monte Carlo norm-ratio experiment against sqrt(2/(q^2-q))");
}
