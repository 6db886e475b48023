#pragma once

#include <cstdint>
#include <string>

namespace omlab::run {

inline constexpr const char* kToolName = "omlab";
inline constexpr const char* kToolVersion = "1.0.0";
// Environment variable supplying the default seed when --seed is not given.
inline constexpr const char* kSeedEnvVar = "OMLAB_SEED";

// Exit-code contract (stable for CI): 0 success, 1 invariant failure,
// 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariantFailure = 1;
inline constexpr int kExitUsage = 2;

// Every verb is a pure function from resolved arguments to output text;
// the executable only parses flags and writes the files.  This keeps
// byte-identical determinism directly testable in-process.
struct VerbResult {
    int exit_code = kExitOk;
    std::string csv;      // primary table (may be empty for point reports)
    std::string json;     // report / summary object (may be empty)
    std::string manifest; // run manifest (populated whenever the verb ran)
    std::string message;  // one-line status for stderr
};

struct ConstantsArgs {
    double p_min = 2.0;
    double p_max = 6.0;
    double step = 1.0;
    std::string format = "csv"; // csv | json
    std::string out_path;       // recorded in the manifest when known
};
VerbResult run_constants(const ConstantsArgs& args);

struct BellmanArgs {
    double p = 3.0;
    std::string branch = "plus"; // plus | minus
    bool point_mode = false;     // evaluate a single (u, v)
    double u = 1.0, v = 1.0;
    bool grid_mode = false; // log-grid scan emitting the CSV table
    int grid = 50;
    double lo = 1e-2, hi = 1e2;
    std::string out_path;
};
VerbResult run_bellman(const BellmanArgs& args);

struct CertifyArgs {
    double p = 3.0;
    int grid = 16;
    int samples = 200; // random constrained direction pairs per grid point
    std::uint64_t seed = 1;
    double lo = 1e-2, hi = 1e2;
    std::string out_path;
};
VerbResult run_certify(const CertifyArgs& args);

struct SimulateArgs {
    double q = 1.5;
    int paths = 10'000;
    int steps = 1'000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    std::string construction = "rotation"; // or "battery" in ratio mode
    std::string mode = "ratio";            // ratio | ito | lemmas
    std::string out_path;
};
VerbResult run_simulate(const SimulateArgs& args);

// Re-dispatches the verb recorded in a manifest and verifies that the
// regenerated outputs match the recorded digests byte-for-byte.
VerbResult run_replay(const std::string& manifest_text);

} // namespace omlab::run
