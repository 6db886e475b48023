#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "omlab/run.hpp"

namespace {

using namespace omlab::run;

bool write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary);
    f << bytes;
    f.flush();
    if (!f) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    return true;
}

// Writes the verb outputs: the primary table/report goes to --out (or stdout),
// a secondary JSON summary and the manifest go to sibling files.
int finish(const VerbResult& r, const std::string& out_path, const char* verb) {
    bool io_ok = true;
    if (!r.csv.empty()) {
        if (out_path.empty())
            std::cout << r.csv;
        else
            io_ok &= write_file(out_path, r.csv);
        if (!r.json.empty() && !out_path.empty())
            io_ok &= write_file(out_path + ".summary.json", r.json);
    } else if (!r.json.empty()) {
        if (out_path.empty())
            std::cout << r.json;
        else
            io_ok &= write_file(out_path, r.json);
    }
    if (!r.manifest.empty()) {
        const std::string mpath = out_path.empty()
                                      ? std::string(verb) + ".manifest.json"
                                      : out_path + ".manifest.json";
        io_ok &= write_file(mpath, r.manifest);
    }
    if (!r.message.empty()) std::cerr << r.message << "\n";
    if (!io_ok && r.exit_code == kExitOk) return kExitInvariantFailure;
    return r.exit_code;
}

bool parse_seed(const char* text, std::uint64_t& out) {
    if (text == nullptr || *text == '\0') return false;
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text, &end, 10);
    if (errno != 0 || end == nullptr || *end != '\0') return false;
    out = v;
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerics laboratory for sharp martingale-subordination "
                 "constants, Bellman surfaces, Hessian certificates, and "
                 "Monte Carlo inequality checks"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::uint64_t default_seed = 1;
    if (const char* env = std::getenv(kSeedEnvVar)) {
        if (!parse_seed(env, default_seed)) {
            std::cerr << "error: " << kSeedEnvVar
                      << " must be an unsigned decimal integer\n";
            return kExitUsage;
        }
    }

    ConstantsArgs ca;
    auto* constants = app.add_subcommand(
        "constants", "root-derived comparison constants table");
    constants->add_option("--p-min", ca.p_min, "lower end of the exponent range")
        ->capture_default_str();
    constants->add_option("--p-max", ca.p_max, "upper end of the exponent range")
        ->capture_default_str();
    constants->add_option("--step", ca.step, "exponent increment")
        ->capture_default_str();
    constants->add_option("--format", ca.format, "output format: csv or json")
        ->capture_default_str();
    constants->add_option("--out", ca.out_path, "output file (default stdout)");

    BellmanArgs ba;
    auto* bellman = app.add_subcommand(
        "bellman", "Bellman surface point reports, grid scans, and "
                   "boundary-system solutions");
    bellman->add_option("--p", ba.p, "large exponent (>= 2)")->capture_default_str();
    bellman->add_option("--branch", ba.branch, "surface branch: plus or minus")
        ->capture_default_str();
    auto* opt_u = bellman->add_option("--u", ba.u, "first coordinate (point mode)");
    auto* opt_v = bellman->add_option("--v", ba.v, "second coordinate (point mode)");
    auto* opt_grid =
        bellman->add_option("--grid", ba.grid, "log-grid resolution (grid mode)");
    bellman->add_option("--lo", ba.lo, "grid lower bound")->capture_default_str();
    bellman->add_option("--hi", ba.hi, "grid upper bound")->capture_default_str();
    bellman->add_option("--out", ba.out_path, "output file (default stdout)");

    CertifyArgs ya;
    ya.seed = default_seed;
    auto* certify = app.add_subcommand(
        "certify", "sum-of-squares certificate and key-inequality scans");
    certify->add_option("--p", ya.p, "large exponent (>= 2)")->capture_default_str();
    certify->add_option("--grid", ya.grid, "log-grid resolution")
        ->capture_default_str();
    certify->add_option("--samples", ya.samples, "direction pairs per grid point")
        ->capture_default_str();
    certify->add_option("--seed", ya.seed, "RNG seed")->capture_default_str();
    certify->add_option("--lo", ya.lo, "grid lower bound")->capture_default_str();
    certify->add_option("--hi", ya.hi, "grid upper bound")->capture_default_str();
    certify->add_option("--out", ya.out_path, "output file (default stdout)");

    SimulateArgs sa;
    sa.seed = default_seed;
    auto* simulate = app.add_subcommand(
        "simulate", "Monte Carlo martingale experiments");
    simulate->add_option("--q", sa.q, "small exponent (1 < q <= 2)")
        ->capture_default_str();
    simulate->add_option("--paths", sa.paths, "number of simulated paths")
        ->capture_default_str();
    simulate->add_option("--steps", sa.steps, "time steps per path")
        ->capture_default_str();
    simulate->add_option("--dt", sa.dt, "time step size")->capture_default_str();
    simulate->add_option("--seed", sa.seed, "RNG seed")->capture_default_str();
    simulate
        ->add_option("--construction", sa.construction,
                     "identity|rotation|mixed|switch|az|battery")
        ->capture_default_str();
    simulate->add_option("--mode", sa.mode, "ratio|ito|lemmas")
        ->capture_default_str();
    simulate->add_option("--out", sa.out_path, "output file (default stdout)");

    std::string manifest_path;
    auto* replay = app.add_subcommand(
        "replay", "re-run a recorded manifest and verify byte-identical outputs");
    replay->add_option("manifest", manifest_path, "manifest JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (constants->parsed()) return finish(run_constants(ca), ca.out_path, "constants");
    if (bellman->parsed()) {
        ba.point_mode = opt_u->count() > 0 || opt_v->count() > 0;
        ba.grid_mode = opt_grid->count() > 0;
        return finish(run_bellman(ba), ba.out_path, "bellman");
    }
    if (certify->parsed()) return finish(run_certify(ya), ya.out_path, "certify");
    if (simulate->parsed()) return finish(run_simulate(sa), sa.out_path, "simulate");
    if (replay->parsed()) {
        std::ifstream f(manifest_path, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot read manifest " << manifest_path << "\n";
            return kExitUsage;
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        const VerbResult r = run_replay(ss.str());
        if (!r.message.empty()) std::cerr << r.message << "\n";
        return r.exit_code;
    }
    return kExitUsage;
}
