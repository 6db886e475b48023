#include "omlab/run.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "omlab/bellman.hpp"
#include "omlab/laguerre.hpp"
#include "omlab/lift.hpp"
#include "omlab/martingale.hpp"
#include "omlab/report.hpp"

namespace omlab::run {

namespace {

using nlohmann::ordered_json;
using report::csv_row;
using report::num;

// JSON numbers are routed through the canonical 10-digit wire format so that
// identical runs dump identical bytes regardless of the raw double bits.
ordered_json jnum(double x) {
    if (!std::isfinite(x)) return ordered_json(num(x)); // string fallback
    return ordered_json::parse(num(x));
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

VerbResult usage_error(std::string msg) {
    VerbResult r;
    r.exit_code = kExitUsage;
    r.message = std::move(msg);
    return r;
}

ordered_json manifest_skeleton(const char* verb) {
    ordered_json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["verb"] = verb;
    return m;
}

// Records output digests in the manifest and serializes it into the result.
void seal(ordered_json& m, VerbResult& r, const std::string& out_path) {
    if (!out_path.empty()) m["out_path"] = out_path;
    ordered_json outs = ordered_json::object();
    if (!r.csv.empty())
        outs["csv"] = {{"bytes", r.csv.size()},
                       {"fnv1a64", report::hex64(report::fnv1a64(r.csv))}};
    if (!r.json.empty())
        outs["json"] = {{"bytes", r.json.size()},
                        {"fnv1a64", report::hex64(report::fnv1a64(r.json))}};
    m["outputs"] = outs;
    r.manifest = dump_json(m);
}

double log_grid(int i, int n, double lo, double hi) {
    return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / double(n - 1));
}

// Relative residual of the gradient/ratio identity
//   B_v/v - beta/alpha + 2/tau = p/tau + (p/q - 1) u/v
// on the interior of the first quadrant (implicit surface only).
double ratio_identity_residual(const ConjugatePair& pq,
                               const bellman::BellmanPoint& pt) {
    if (!(pt.u > 0.0) || !(pt.v > 0.0)) return 0.0;
    const double a1 = pt.b_v / pt.v;
    const double a2 = -pt.beta / pt.alpha;
    const double a3 = 2.0 / pt.tau;
    const double b1 = pq.p / pt.tau;
    const double b2 = (pq.p / pq.q - 1.0) * pt.u / pt.v;
    const double scale =
        std::fabs(a1) + std::fabs(a2) + a3 + b1 + std::fabs(b2);
    return std::fabs(a1 + a2 + a3 - b1 - b2) / scale;
}

} // namespace

VerbResult run_constants(const ConstantsArgs& a) {
    if (!(a.p_min >= 1.01))
        return usage_error("constants: --p-min must be >= 1.01");
    if (!(a.p_max >= a.p_min))
        return usage_error("constants: bad range (--p-max must be >= --p-min)");
    if (!(a.step > 0.0)) return usage_error("constants: --step must be > 0");
    if (a.format != "csv" && a.format != "json")
        return usage_error("constants: --format must be csv or json");
    if ((a.p_max - a.p_min) / a.step > 10000.0)
        return usage_error("constants: range/step would emit more than 10000 rows");

    // Small exponents are folded onto the large leg of their conjugate pair;
    // the table is keyed by p >= 2.
    std::vector<double> ps;
    for (int i = 0;; ++i) {
        const double p = a.p_min + i * a.step;
        if (p > a.p_max + 1e-9) break;
        ps.push_back(ConjugatePair::from_either(p).p);
    }
    const auto rows = laguerre::conjecture_table(ps);

    VerbResult r;
    std::string failed_list;
    ordered_json jrows = ordered_json::array();
    std::string csv = csv_row({"p", "q", "z_p", "z_q", "c_left", "c_right", "gap"});
    for (const auto& row : rows) {
        if (row.failed) {
            csv += csv_row({num(row.p), num(row.q), "", "", "", "", ""});
            jrows.push_back({{"p", jnum(row.p)},
                             {"q", jnum(row.q)},
                             {"failed", true}});
            if (!failed_list.empty()) failed_list += ", ";
            failed_list += num(row.p);
            continue;
        }
        csv += csv_row({num(row.p), num(row.q), num(row.z_p), num(row.z_q),
                        num(row.c_left), num(row.c_right), num(row.gap)});
        jrows.push_back({{"p", jnum(row.p)},
                         {"q", jnum(row.q)},
                         {"z_p", jnum(row.z_p)},
                         {"z_q", jnum(row.z_q)},
                         {"c_left", jnum(row.c_left)},
                         {"c_right", jnum(row.c_right)},
                         {"gap", jnum(row.gap)},
                         {"failed", false}});
    }
    if (a.format == "csv")
        r.csv = csv;
    else
        r.json = dump_json(jrows);

    ordered_json m = manifest_skeleton("constants");
    m["params"] = {{"p_min", jnum(a.p_min)},
                   {"p_max", jnum(a.p_max)},
                   {"step", jnum(a.step)},
                   {"format", a.format}};
    seal(m, r, a.out_path);

    if (!failed_list.empty()) {
        r.exit_code = kExitInvariantFailure;
        r.message = "root finder failed at p = " + failed_list;
    } else {
        r.message = "constants: " + std::to_string(rows.size()) + " rows";
    }
    return r;
}

namespace {

ordered_json point_report(const ConjugatePair& pq, const bellman::BellmanPoint& pt,
                          const char* branch) {
    ordered_json j;
    j["branch"] = branch;
    j["p"] = jnum(pq.p);
    j["q"] = jnum(pq.q);
    j["u"] = jnum(pt.u);
    j["v"] = jnum(pt.v);
    j["t"] = jnum(pt.t);
    j["B"] = jnum(pt.value);
    j["B_u"] = jnum(pt.b_u);
    j["B_v"] = jnum(pt.b_v);
    j["B_uu"] = jnum(pt.b_uu);
    j["B_vv"] = jnum(pt.b_vv);
    j["B_uv_shifted"] = jnum(pt.b_uv_shifted);
    j["shift"] = jnum(pt.shift);
    j["S"] = jnum(pt.S);
    j["alpha"] = jnum(pt.alpha);
    j["beta"] = jnum(pt.beta);
    j["tau"] = jnum(pt.tau);
    j["det_residual"] = jnum(bellman::det_residual_rel(pt));
    j["majorant"] = jnum(bellman::majorant(pq, pt.u, pt.v));
    j["bound_slack"] = jnum(bellman::bound_slack(pq, pt));
    return j;
}

ordered_json minus_solution_report(const bellman::PogorelovSolution& sol) {
    ordered_json j;
    j["branch"] = "minus";
    j["p"] = jnum(sol.p);
    j["q"] = jnum(sol.q);
    j["C1"] = jnum(sol.C1);
    j["abs_C1"] = jnum(std::fabs(sol.C1));
    j["C2"] = jnum(sol.C2);
    j["gamma"] = jnum(sol.gamma);
    j["a"] = jnum(sol.a);
    j["b"] = jnum(sol.b);
    j["improvement_c"] = jnum(sol.improvement_c);
    // The improved q = 3/2 comparison constant 2*sqrt(2)/sqrt(c).
    j["improved_constant"] = jnum(2.0 * std::sqrt(2.0) / std::sqrt(sol.improvement_c));
    return j;
}

} // namespace

VerbResult run_bellman(const BellmanArgs& a) {
    if (a.branch != "plus" && a.branch != "minus")
        return usage_error("bellman: --branch must be plus or minus");
    if (!(a.p >= 2.0))
        return usage_error(
            "bellman: --p must be >= 2 (small exponents enter via the conjugate pair)");
    if (a.point_mode && a.grid_mode)
        return usage_error("bellman: point and grid modes are mutually exclusive");
    if (a.grid_mode && a.grid < 2)
        return usage_error("bellman: --grid must be >= 2");
    if (a.grid_mode && !(a.lo > 0.0 && a.hi > a.lo))
        return usage_error("bellman: need 0 < lo < hi");
    const bool minus = a.branch == "minus";
    if (minus && (a.point_mode || a.grid_mode) && std::fabs(a.p - 3.0) > 1e-12)
        return usage_error(
            "bellman: the minus-branch surface has a closed form only at --p 3");

    const ConjugatePair pq = ConjugatePair::from_p(a.p);
    VerbResult r;
    ordered_json m = manifest_skeleton("bellman");
    const char* mode = a.grid_mode ? "grid" : (a.point_mode || !minus) ? "point" : "solve";
    m["params"] = {{"p", jnum(a.p)},     {"branch", a.branch}, {"mode", mode},
                   {"u", jnum(a.u)},     {"v", jnum(a.v)},     {"grid", a.grid},
                   {"lo", jnum(a.lo)},   {"hi", jnum(a.hi)}};

    bellman::PogorelovSolution sol{};
    if (minus) {
        try {
            sol = bellman::solve_pogorelov_minus(pq);
        } catch (const std::domain_error& e) {
            return usage_error(std::string("bellman: ") + e.what());
        }
    }

    bool bad = false;
    std::string why;
    const auto note = [&](const char* what, double x1, double x2) {
        if (!bad) {
            bad = true;
            why = std::string(what) + " violated at (u=" + num(x1) + ", v=" + num(x2) + ")";
        }
    };

    if (a.grid_mode) {
        std::string csv = csv_row(
            {"u", "v", "t", "B", "B_u", "B_v", "tau", "det_residual", "bound_slack"});
        double max_det = 0.0, min_slack = HUGE_VAL, max_ident = 0.0;
        double det_u = 0, det_v = 0, slack_u = 0, slack_v = 0;
        for (int i = 0; i < a.grid; ++i) {
            const double u = log_grid(i, a.grid, a.lo, a.hi);
            for (int j = 0; j < a.grid; ++j) {
                const double v = log_grid(j, a.grid, a.lo, a.hi);
                const bellman::BellmanPoint pt =
                    minus ? bellman::eval_closed_p3_minus(u, v, sol)
                          : bellman::eval_bellman(pq, u, v);
                const double det = bellman::det_residual_rel(pt);
                const double phi = bellman::majorant(pq, u, v);
                const double slack = (phi - pt.value) / (1.0 + std::fabs(phi));
                csv += csv_row({num(u), num(v), num(pt.t), num(pt.value), num(pt.b_u),
                                num(pt.b_v), num(pt.tau), num(det),
                                num(phi - pt.value)});
                if (det > max_det) { max_det = det; det_u = u; det_v = v; }
                if (slack < min_slack) { min_slack = slack; slack_u = u; slack_v = v; }
                if (det > 1e-8) note("degeneracy", u, v);
                if (std::fabs(pt.b_u / pt.u - pt.tau) > 1e-10 * (1.0 + pt.tau))
                    note("gradient-ratio identity", u, v);
                if (!minus) {
                    const double ident = ratio_identity_residual(pq, pt);
                    max_ident = std::max(max_ident, ident);
                    if (ident > 1e-10) note("ratio identity", u, v);
                    if (pt.value < -1e-12 * (1.0 + phi) || slack < -1e-12)
                        note("bound chain", u, v);
                }
            }
        }
        r.csv = csv;
        ordered_json summary;
        summary["branch"] = a.branch;
        summary["p"] = jnum(a.p);
        summary["max_det_residual"] = jnum(max_det);
        summary["min_bound_slack"] = jnum(min_slack);
        if (!minus) summary["max_identity_residual"] = jnum(max_ident);
        summary["worst_points"] = {
            {"det", {{"u", jnum(det_u)}, {"v", jnum(det_v)}}},
            {"bound", {{"u", jnum(slack_u)}, {"v", jnum(slack_v)}}}};
        r.json = dump_json(summary);
    } else if (a.point_mode || !minus) {
        const bellman::BellmanPoint pt = minus
                                             ? bellman::eval_closed_p3_minus(a.u, a.v, sol)
                                             : bellman::eval_bellman(pq, a.u, a.v);
        ordered_json j = point_report(pq, pt, a.branch.c_str());
        if (minus) j["solution"] = minus_solution_report(sol);
        r.json = dump_json(j);
        if (bellman::det_residual_rel(pt) > 1e-8) note("degeneracy", pt.u, pt.v);
        if (pt.u > 0.0 && std::fabs(pt.b_u / pt.u - pt.tau) > 1e-10 * (1.0 + pt.tau))
            note("gradient-ratio identity", pt.u, pt.v);
        if (!minus && ratio_identity_residual(pq, pt) > 1e-10)
            note("ratio identity", pt.u, pt.v);
    } else {
        r.json = dump_json(minus_solution_report(sol));
    }

    seal(m, r, a.out_path);
    if (bad) {
        r.exit_code = kExitInvariantFailure;
        r.message = "bellman: " + why;
    } else {
        r.message = std::string("bellman: ") + mode + " ok";
    }
    return r;
}

VerbResult run_certify(const CertifyArgs& a) {
    if (!(a.p >= 2.0)) return usage_error("certify: --p must be >= 2");
    if (a.grid < 2) return usage_error("certify: --grid must be >= 2");
    if (a.samples < 1) return usage_error("certify: --samples must be >= 1");
    if (!(a.lo > 0.0 && a.hi > a.lo)) return usage_error("certify: need 0 < lo < hi");

    const ConjugatePair pq = ConjugatePair::from_p(a.p);
    VerbResult r;
    std::string csv =
        csv_row({"x1", "x2", "min_slack_tau_cond", "min_slack_key", "max_fd_error"});

    double all_min_tau = HUGE_VAL, all_min_key = HUGE_VAL, all_max_fd = 0.0;
    bool bad = false;
    std::string why;

    for (int i = 0; i < a.grid; ++i) {
        const double x1 = log_grid(i, a.grid, a.lo, a.hi);
        for (int j = 0; j < a.grid; ++j) {
            const double x2 = log_grid(j, a.grid, a.lo, a.hi);
            const bellman::BellmanPoint base = bellman::eval_bellman(pq, x1, x2);
            // Rotational-coefficient condition, general-p form:
            // B_v/x2 + 1/tau >= p/tau.
            const double tau_slack =
                base.b_v / x2 + 1.0 / base.tau - pq.p / base.tau;
            if (tau_slack < -1e-12 && !bad) {
                bad = true;
                why = "rotational-coefficient slack " + num(tau_slack) +
                      " at (x1=" + num(x1) + ", x2=" + num(x2) + ")";
            }

            mart::Rng rng(a.seed, std::uint64_t(i) * std::uint64_t(a.grid) + j);
            double min_key = HUGE_VAL, max_fd = 0.0;
            for (int s = 0; s < a.samples; ++s) {
                const double th1 = 6.283185307179586 * rng.next_unit();
                const double th2 = 6.283185307179586 * rng.next_unit();
                const Vec2 y1{x1 * std::cos(th1), x1 * std::sin(th1)};
                const Vec2 y2{x2 * std::cos(th2), x2 * std::sin(th2)};
                const lift::LiftedPoint lp{y1, y2, x1, x2, base, pq};

                const Vec2 dy1{rng.next_gaussian(), rng.next_gaussian()};
                const Vec2 dy1p{rng.next_gaussian(), rng.next_gaussian()};
                const Vec2 dy2{rng.next_gaussian(), rng.next_gaussian()};
                const double sign = rng.next_unit() < 0.5 ? -1.0 : 1.0;
                const Vec2 dy2p{-sign * dy2[1], sign * dy2[0]};

                const lift::KeyInequalityResult kr =
                    lift::key_inequality_pair(lp, dy1, dy2, dy1p, dy2p);
                min_key = std::min(min_key, kr.slack);
                const double kscale = std::fabs(kr.lhs) + std::fabs(kr.rhs);
                if (kr.slack < -1e-10 * kscale && !bad) {
                    bad = true;
                    why = "key-inequality slack " + num(kr.slack) + " at (x1=" +
                          num(x1) + ", x2=" + num(x2) + ")";
                }

                if (s < 4) {
                    // Central second difference of the lifted scalar function
                    // against the analytic form.  Each block of the direction
                    // is rescaled to its coordinate's norm so one dimensionless
                    // step h perturbs both blocks at the same relative size.
                    const double n1 = std::sqrt(norm_sq(dy1));
                    const double n2 = std::sqrt(norm_sq(dy2));
                    if (n1 > 0.0 && n2 > 0.0) {
                        const Vec2 d1{dy1[0] * x1 / n1, dy1[1] * x1 / n1};
                        const Vec2 d2{dy2[0] * x2 / n2, dy2[1] * x2 / n2};
                        const double h = 1e-4;
                        const auto bb = [&](double sgn) {
                            const Vec2 a1{y1[0] + sgn * h * d1[0],
                                          y1[1] + sgn * h * d1[1]};
                            const Vec2 a2{y2[0] + sgn * h * d2[0],
                                          y2[1] + sgn * h * d2[1]};
                            return bellman::eval_bellman(pq, std::sqrt(norm_sq(a1)),
                                                         std::sqrt(norm_sq(a2)))
                                .value;
                        };
                        const double fd =
                            (bb(1.0) - 2.0 * base.value + bb(-1.0)) / (h * h);
                        const double an = lift::lifted_hessian_apply(lp, d1, d2);
                        const double rel = std::fabs(fd - an) /
                                           (std::fabs(an) + std::fabs(fd) + 1e-9);
                        max_fd = std::max(max_fd, rel);
                    }
                }
            }
            csv += csv_row({num(x1), num(x2), num(tau_slack), num(min_key),
                            num(max_fd)});
            all_min_tau = std::min(all_min_tau, tau_slack);
            all_min_key = std::min(all_min_key, min_key);
            all_max_fd = std::max(all_max_fd, max_fd);
        }
    }
    r.csv = csv;

    ordered_json summary;
    summary["p"] = jnum(a.p);
    summary["grid"] = a.grid;
    summary["samples"] = a.samples;
    summary["seed"] = a.seed;
    summary["min_slack_tau_cond"] = jnum(all_min_tau);
    summary["min_slack_key"] = jnum(all_min_key);
    summary["max_fd_error"] = jnum(all_max_fd);
    summary["pass"] = !bad;
    r.json = dump_json(summary);

    ordered_json m = manifest_skeleton("certify");
    m["params"] = {{"p", jnum(a.p)}, {"grid", a.grid},   {"samples", a.samples},
                   {"seed", a.seed}, {"lo", jnum(a.lo)}, {"hi", jnum(a.hi)}};
    seal(m, r, a.out_path);

    if (bad) {
        r.exit_code = kExitInvariantFailure;
        r.message = "certify: " + why;
    } else {
        r.message = "certify: all slacks within tolerance";
    }
    return r;
}

VerbResult run_simulate(const SimulateArgs& a) {
    if (a.paths < 1) return usage_error("simulate: --paths must be >= 1");
    if (a.steps < 1) return usage_error("simulate: --steps must be >= 1");
    if (!(a.dt > 0.0)) return usage_error("simulate: --dt must be > 0");
    if (a.mode != "ratio" && a.mode != "ito" && a.mode != "lemmas")
        return usage_error("simulate: --mode must be ratio, ito, or lemmas");
    if (a.mode != "lemmas") {
        try {
            (void)ConjugatePair::from_q(a.q);
        } catch (const std::domain_error& e) {
            return usage_error(std::string("simulate: ") + e.what());
        }
    }

    static const std::vector<std::string> kBattery = {"identity", "rotation",
                                                      "mixed", "switch"};
    std::vector<std::string> constructions;
    if (a.mode == "ratio" && a.construction == "battery")
        constructions = kBattery;
    else
        constructions = {a.construction};
    if (a.mode != "ratio" && a.construction == "battery")
        return usage_error("simulate: battery expansion is a ratio-mode feature");

    VerbResult r;
    std::string csv = csv_row({"q", "paths", "steps", "dt", "seed", "construction",
                               "ratio", "bound", "margin", "std_error"});
    ordered_json jreports = ordered_json::array();
    bool bad = false;
    std::string why;
    const auto fail = [&](const std::string& w) {
        if (!bad) {
            bad = true;
            why = w;
        }
    };

    try {
        if (a.mode == "ratio") {
            for (const std::string& c : constructions) {
                mart::MartingaleSpec spec;
                spec.q = a.q;
                spec.paths = a.paths;
                spec.steps = a.steps;
                spec.dt = a.dt;
                spec.seed = a.seed;
                spec.construction = c;
                const mart::ExperimentReport rep = mart::inequality_experiment(spec);
                csv += csv_row({num(a.q), std::to_string(a.paths),
                                std::to_string(a.steps), num(a.dt),
                                std::to_string(a.seed), c, num(rep.ratio),
                                num(rep.bound), num(rep.margin), num(rep.std_error)});
                jreports.push_back({{"construction", c},
                                    {"ratio", jnum(rep.ratio)},
                                    {"bound", jnum(rep.bound)},
                                    {"margin", jnum(rep.margin)},
                                    {"std_error", jnum(rep.std_error)}});
                if (rep.margin < -3.0 * rep.std_error)
                    fail("bound violated beyond 3 standard errors by construction " + c);
            }
        } else if (a.mode == "ito") {
            mart::MartingaleSpec spec;
            spec.q = a.q;
            spec.paths = a.paths;
            spec.steps = a.steps;
            spec.dt = a.dt;
            spec.seed = a.seed;
            spec.construction = a.construction;
            const mart::ItoChainReport rep = mart::ito_chain_check(spec);
            const double ratio = rep.rhs != 0.0 ? rep.lhs / rep.rhs : 0.0;
            csv += csv_row({num(a.q), std::to_string(a.paths), std::to_string(a.steps),
                            num(a.dt), std::to_string(a.seed), a.construction,
                            num(ratio), "1", num(rep.slack), num(rep.std_error)});
            jreports.push_back({{"construction", a.construction},
                                {"lhs", jnum(rep.lhs)},
                                {"rhs", jnum(rep.rhs)},
                                {"slack", jnum(rep.slack)},
                                {"std_error", jnum(rep.std_error)}});
            if (rep.slack < -3.0 * rep.std_error)
                fail("pathwise chain bound violated beyond 3 standard errors");
        } else { // lemmas
            const mart::LemmaReport rep =
                mart::check_transform_lemmas(a.seed, a.paths);
            csv += csv_row({num(a.q), std::to_string(a.paths), std::to_string(a.steps),
                            num(a.dt), std::to_string(a.seed), "az",
                            num(rep.max_bracket_ratio), "4",
                            num(4.0 - rep.max_bracket_ratio), "0"});
            jreports.push_back({{"n_draws", rep.n_draws},
                                {"max_abs_dot", jnum(rep.max_abs_dot)},
                                {"max_bracket_ratio", jnum(rep.max_bracket_ratio)}});
            if (rep.max_abs_dot > 1e-14)
                fail("transform orthogonality residual exceeds 1e-14");
            if (rep.max_bracket_ratio > 4.0 + 1e-12)
                fail("bracket domination factor exceeds 4");
        }
    } catch (const std::invalid_argument& e) {
        return usage_error(std::string("simulate: ") + e.what());
    } catch (const std::runtime_error& e) {
        VerbResult f;
        f.exit_code = kExitInvariantFailure;
        f.message = std::string("simulate: ") + e.what();
        return f;
    }

    r.csv = csv;
    ordered_json jr;
    jr["mode"] = a.mode;
    jr["q"] = jnum(a.q);
    jr["reports"] = jreports;
    r.json = dump_json(jr);

    ordered_json m = manifest_skeleton("simulate");
    m["params"] = {{"q", jnum(a.q)},   {"paths", a.paths},
                   {"steps", a.steps}, {"dt", jnum(a.dt)},
                   {"seed", a.seed},   {"construction", a.construction},
                   {"mode", a.mode}};
    seal(m, r, a.out_path);

    if (bad) {
        r.exit_code = kExitInvariantFailure;
        r.message = "simulate: " + why;
    } else {
        r.message = "simulate: " + a.mode + " ok";
    }
    return r;
}

VerbResult run_replay(const std::string& manifest_text) {
    ordered_json m;
    try {
        m = ordered_json::parse(manifest_text);
    } catch (const std::exception&) {
        return usage_error("replay: malformed manifest JSON");
    }
    if (!m.is_object() || m.value("tool", "") != kToolName)
        return usage_error("replay: manifest is not from this tool");
    if (m.value("version", "") != kToolVersion)
        return usage_error("replay: manifest was written by a different tool version");
    if (!m.contains("verb") || !m.contains("params") || !m.contains("outputs"))
        return usage_error("replay: manifest is missing verb, params, or outputs");

    const std::string verb = m["verb"].get<std::string>();
    const ordered_json& p = m["params"];
    VerbResult regen;
    try {
        if (verb == "constants") {
            ConstantsArgs a;
            a.p_min = p.value("p_min", a.p_min);
            a.p_max = p.value("p_max", a.p_max);
            a.step = p.value("step", a.step);
            a.format = p.value("format", a.format);
            regen = run_constants(a);
        } else if (verb == "bellman") {
            BellmanArgs a;
            a.p = p.value("p", a.p);
            a.branch = p.value("branch", a.branch);
            const std::string mode = p.value("mode", "point");
            a.point_mode = mode == "point";
            a.grid_mode = mode == "grid";
            a.u = p.value("u", a.u);
            a.v = p.value("v", a.v);
            a.grid = p.value("grid", a.grid);
            a.lo = p.value("lo", a.lo);
            a.hi = p.value("hi", a.hi);
            regen = run_bellman(a);
        } else if (verb == "certify") {
            CertifyArgs a;
            a.p = p.value("p", a.p);
            a.grid = p.value("grid", a.grid);
            a.samples = p.value("samples", a.samples);
            a.seed = p.value("seed", a.seed);
            a.lo = p.value("lo", a.lo);
            a.hi = p.value("hi", a.hi);
            regen = run_certify(a);
        } else if (verb == "simulate") {
            SimulateArgs a;
            a.q = p.value("q", a.q);
            a.paths = p.value("paths", a.paths);
            a.steps = p.value("steps", a.steps);
            a.dt = p.value("dt", a.dt);
            a.seed = p.value("seed", a.seed);
            a.construction = p.value("construction", a.construction);
            a.mode = p.value("mode", a.mode);
            regen = run_simulate(a);
        } else {
            return usage_error("replay: unknown verb '" + verb + "'");
        }
    } catch (const std::exception& e) {
        VerbResult f;
        f.exit_code = kExitInvariantFailure;
        f.message = std::string("replay: regeneration failed: ") + e.what();
        return f;
    }
    if (regen.exit_code == kExitUsage) {
        regen.message = "replay: recorded parameters were rejected: " + regen.message;
        return regen;
    }

    const ordered_json& outs = m["outputs"];
    int compared = 0;
    std::string mismatch;
    const auto compare = [&](const char* key, const std::string& bytes) {
        if (!outs.contains(key)) {
            if (!bytes.empty() && mismatch.empty())
                mismatch = std::string(key) + " output regenerated but not recorded";
            return;
        }
        ++compared;
        const std::string want = outs[key].value("fnv1a64", "");
        const std::string got = report::hex64(report::fnv1a64(bytes));
        if (want != got && mismatch.empty())
            mismatch = std::string(key) + " digest differs (recorded " + want +
                       ", regenerated " + got + ")";
    };
    compare("csv", regen.csv);
    compare("json", regen.json);

    if (!mismatch.empty()) {
        regen.exit_code = kExitInvariantFailure;
        regen.message = "replay: " + mismatch;
    } else {
        regen.exit_code = kExitOk;
        regen.message =
            "replay: " + std::to_string(compared) + " output(s) byte-identical";
    }
    return regen;
}

} // namespace omlab::run
