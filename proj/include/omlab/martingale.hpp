#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "omlab/conjugate.hpp"
#include "omlab/vec2.hpp"

namespace omlab::mart {

using omlab::Vec2;

// Deterministic counter-based stream: the splitmix64 mixer over a Weyl
// sequence, keyed per path by an avalanche of (seed, stream index).  Chosen
// over std::normal_distribution so that byte-identical reproduction of CSV
// outputs does not depend on the standard library's unspecified algorithm.
class Rng {
  public:
    Rng(std::uint64_t seed, std::uint64_t stream);
    std::uint64_t next_u64();
    double next_unit();     // uniform on (0, 1)
    double next_gaussian(); // standard normal (Box-Muller, cached pair)

  private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Difference transform behind the orthogonal-martingale construction:
// given one step's Z-differences (x, y) against a 2-D Brownian increment,
// the W-differences are
//     u = (-x1 - y2,  x2 - y1),    v = (x2 - y1,  x1 + y2).
// Then u.v = 0 and |u| = |v| hold exactly (also in floating point), and the
// bracket increments satisfy |u|^2 + |v|^2 <= 4 (|x|^2 + |y|^2).
std::pair<Vec2, Vec2> transform_AZ(const Vec2& x, const Vec2& y);

// Discrete-time Euler scheme for R^2-valued martingales Z = (X, Y) and
// W = (U, V) on the filtration of a 2-D Gaussian random walk.  Strategy
// differences are predictable: the step-n coefficients depend only on the
// state before step n.
//
// Shipped construction families (all make W orthogonal with equal bracket
// increments, and Z differentially subordinate to W, per step by design):
//   "identity"  constant frame u=(r,0), v=(0,r); Z = W.
//   "rotation"  rotating frame with predictable angle/amplitude driven by
//               the current W; Z-differences are an adapted rotation of the
//               (u,v) frame at scale 1 (equal brackets).
//   "mixed"     rotating frame with varying amplitude; Z-differences carry a
//               predictable scale <= 1 (strict subordination).
//   "switch"    sign of the Z coupling flips at fixed step fractions.
//   "az"        free rotating Z; W is its per-step difference transform,
//               carrying exactly 4x the bracket of Z (the lemma-check
//               family; excluded from the default ratio battery).
struct MartingaleSpec {
    double q = 1.5;
    int paths = 10'000;
    int steps = 1'000;
    double dt = 1e-3;
    std::uint64_t seed = 1;
    std::string construction = "rotation";
};

struct PathEnsemble {
    MartingaleSpec spec;
    // terminal values per path
    std::vector<double> z_x, z_y;
    std::vector<double> w_u, w_v;
    // per-path covariation accumulators (discrete sums of dot products * dt)
    std::vector<double> bracket_z;  // <X,X> + <Y,Y>
    std::vector<double> bracket_uu; // <U,U>
    std::vector<double> bracket_vv; // <V,V>
    std::vector<double> bracket_uv; // <U,V>
    // pathwise chain data (populated when with_chain is set in simulate):
    // terminal of the auxiliary martingale F and the integral
    // integral of sqrt(|u|^2+|v|^2) * sqrt(|phi|^2+|psi|^2) ds.
    std::vector<double> f_x, f_y;
    std::vector<double> chain_integral;
};

// Runs the ensemble. enforce_hypotheses additionally asserts, at every step,
// W-orthogonality, equal W-brackets, and d<Z,Z> <= d<W,W>; a violation
// raises a runtime_error naming the path and step (ratio-mode contract).
PathEnsemble simulate(const MartingaleSpec& spec,
                      bool enforce_hypotheses = false,
                      bool with_chain = false);

struct NormEstimate {
    double value;     // (mean |T|^p)^{1/p}
    double std_error; // delta-method standard error of the value
};
// which: 'Z' or 'W' (terminal Euclidean norms).
NormEstimate estimate_norm(const PathEnsemble& ens, char which, double p);

// Ratio experiment against the subordination bound sqrt(2/(q^2-q)).
struct ExperimentReport {
    MartingaleSpec spec;
    double ratio;     // ||Z||_q / ||W||_q estimate
    double bound;     // sqrt(2/(q^2 - q))
    double margin;    // bound - ratio
    double std_error; // paired delta-method standard error of the ratio
};
ExperimentReport inequality_experiment(const MartingaleSpec& spec);

// Pathwise bilinear chain at q = 3/2: per path,
//   lhs_path = sqrt(3/2) * integral sqrt(|u|^2+|v|^2) sqrt(|phi|^2+|psi|^2) ds
//   rhs_path = (4/3) |W_T|^{3/2} + (2/3) |F_T|^3
// where W is orthogonal with equal brackets and F is an arbitrary adapted
// martingale; reports slack = mean(rhs - lhs) with its standard error.
struct ItoChainReport {
    double lhs;
    double rhs;
    double slack;     // rhs - lhs
    double std_error; // standard error of the paired per-path difference
};
ItoChainReport ito_chain_check(const MartingaleSpec& spec);

// Dense random check of the difference-transform identities:
// max |u.v| (absolute, scaled) and max (|u|^2+|v|^2)/(|x|^2+|y|^2) over
// n_draws Gaussian draws.
struct LemmaReport {
    long n_draws;
    double max_abs_dot;       // max |u.v| / scale
    double max_bracket_ratio; // max d<W,W> / d<Z,Z>  (<= 4 up to rounding)
};
LemmaReport check_transform_lemmas(std::uint64_t seed, long n_draws);

} // namespace omlab::mart
