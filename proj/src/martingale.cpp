#include "omlab/martingale.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace omlab::mart {

namespace {

constexpr std::uint64_t kWeyl = 0x9E3779B97f4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(mix64(seed + kWeyl) + kWeyl * (stream + 1))) {}

std::uint64_t Rng::next_u64() {
    state_ += kWeyl;
    return mix64(state_);
}

double Rng::next_unit() {
    // 53-bit mantissa, offset by half a ulp so the result is in (0, 1).
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::next_gaussian() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(kTwoPi * u2);
    has_cached_ = true;
    return r * std::cos(kTwoPi * u2);
}

std::pair<Vec2, Vec2> transform_AZ(const Vec2& x, const Vec2& y) {
    const Vec2 u{-x[0] - y[1], x[1] - y[0]};
    const Vec2 v{x[1] - y[0], x[0] + y[1]};
    return {u, v};
}

namespace {

enum class Kind { identity, rotation, mixed, flip, az };

Kind parse_kind(const std::string& name) {
    if (name == "identity") return Kind::identity;
    if (name == "rotation") return Kind::rotation;
    if (name == "mixed") return Kind::mixed;
    if (name == "switch") return Kind::flip;
    if (name == "az") return Kind::az;
    throw std::invalid_argument("unknown construction '" + name +
                                "' (expected identity, rotation, mixed, switch, az)");
}

[[noreturn]] void hypothesis_failure(int path, int step, const char* which) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "subordination hypothesis violated at path %d step %d: %s", path,
                  step, which);
    throw std::runtime_error(msg);
}

} // namespace

PathEnsemble simulate(const MartingaleSpec& spec, bool enforce_hypotheses,
                      bool with_chain) {
    if (spec.paths < 1) throw std::invalid_argument("simulate: paths must be >= 1");
    if (spec.steps < 1) throw std::invalid_argument("simulate: steps must be >= 1");
    if (!(spec.dt > 0.0)) throw std::invalid_argument("simulate: dt must be > 0");
    const Kind kind = parse_kind(spec.construction);

    PathEnsemble e;
    e.spec = spec;
    e.z_x.reserve(spec.paths);
    e.z_y.reserve(spec.paths);
    e.w_u.reserve(spec.paths);
    e.w_v.reserve(spec.paths);
    e.bracket_z.reserve(spec.paths);
    e.bracket_uu.reserve(spec.paths);
    e.bracket_vv.reserve(spec.paths);
    e.bracket_uv.reserve(spec.paths);
    if (with_chain) {
        e.f_x.reserve(spec.paths);
        e.f_y.reserve(spec.paths);
        e.chain_integral.reserve(spec.paths);
    }

    const double dt = spec.dt;
    const double sdt = std::sqrt(dt);
    for (int path = 0; path < spec.paths; ++path) {
        Rng rng(spec.seed, std::uint64_t(path));
        double Zx = 0, Zy = 0, Wu = 0, Wv = 0, Fx = 0, Fy = 0;
        double bz = 0, buu = 0, bvv = 0, buv = 0, chain = 0;

        for (int n = 0; n < spec.steps; ++n) {
            // Predictable strategy vectors: functions of the step index and
            // of the state left-limits only.
            Vec2 u, v, x, y;
            switch (kind) {
            case Kind::identity:
                u = {1.0, 0.0};
                v = {0.0, 1.0};
                x = u;
                y = v;
                break;
            case Kind::rotation:
            case Kind::mixed:
            case Kind::flip: {
                const double th = std::atan2(Wv, Wu);
                const double r =
                    kind == Kind::mixed ? 1.0 + 0.5 * std::sin(0.01 * n) : 1.0;
                const double c = std::cos(th), s = std::sin(th);
                u = {r * c, -r * s};
                v = {r * s, r * c};
                double rho = 1.0;
                if (kind == Kind::mixed) {
                    const double cc = std::cos(0.05 * n);
                    rho = 0.5 + 0.5 * cc * cc; // predictable scale in [1/2, 1]
                }
                double sign = 1.0;
                if (kind == Kind::flip)
                    sign = ((4 * n) / spec.steps) % 2 == 0 ? 1.0 : -1.0;
                const double ph = 0.37 * n + th;
                const double cp = std::cos(ph), sp = std::sin(ph);
                const double m = sign * rho;
                x = {m * (cp * u[0] + sp * v[0]), m * (cp * u[1] + sp * v[1])};
                y = {m * (-sp * u[0] + cp * v[0]), m * (-sp * u[1] + cp * v[1])};
                break;
            }
            case Kind::az: {
                const double psi = 0.23 * n + std::atan2(Zy, Zx);
                x = {std::cos(psi), std::sin(psi)};
                y = {-std::sin(psi), std::cos(psi)};
                const auto uv = transform_AZ(x, y);
                u = uv.first;
                v = uv.second;
                break;
            }
            }

            const double nu = norm_sq(u), nv = norm_sq(v);
            const double nz = norm_sq(x) + norm_sq(y);
            if (enforce_hypotheses) {
                const double scale = nu + nv;
                if (std::fabs(dot(u, v)) > 1e-12 * scale)
                    hypothesis_failure(path, n, "frame orthogonality");
                if (std::fabs(nu - nv) > 1e-12 * scale)
                    hypothesis_failure(path, n, "equal frame lengths");
                if (nz > scale * (1.0 + 1e-12))
                    hypothesis_failure(path, n, "bracket domination");
            }

            Vec2 phiv{0, 0}, psiv{0, 0};
            if (with_chain) {
                // An arbitrary adapted companion martingale F for the
                // pathwise chain bound; no structural constraints apply.
                const double om = 0.13 * n + 0.5 * std::atan2(Fy, Fx);
                const double a = 0.8 + 0.4 * std::sin(0.07 * n);
                const double b = 1.1 + 0.3 * std::cos(0.05 * n);
                phiv = {a * std::cos(om), a * std::sin(om)};
                psiv = {b * std::cos(om + 1.1), b * std::sin(om + 1.1)};
                chain += std::sqrt(nu + nv) *
                         std::sqrt(norm_sq(phiv) + norm_sq(psiv)) * dt;
            }

            const double dB1 = rng.next_gaussian() * sdt;
            const double dB2 = rng.next_gaussian() * sdt;
            Wu += u[0] * dB1 + u[1] * dB2;
            Wv += v[0] * dB1 + v[1] * dB2;
            Zx += x[0] * dB1 + x[1] * dB2;
            Zy += y[0] * dB1 + y[1] * dB2;
            if (with_chain) {
                Fx += phiv[0] * dB1 + phiv[1] * dB2;
                Fy += psiv[0] * dB1 + psiv[1] * dB2;
            }
            buu += nu * dt;
            bvv += nv * dt;
            buv += dot(u, v) * dt;
            bz += nz * dt;
        }

        e.z_x.push_back(Zx);
        e.z_y.push_back(Zy);
        e.w_u.push_back(Wu);
        e.w_v.push_back(Wv);
        e.bracket_z.push_back(bz);
        e.bracket_uu.push_back(buu);
        e.bracket_vv.push_back(bvv);
        e.bracket_uv.push_back(buv);
        if (with_chain) {
            e.f_x.push_back(Fx);
            e.f_y.push_back(Fy);
            e.chain_integral.push_back(chain);
        }
    }
    return e;
}

namespace {

struct MeanVar {
    double mean;
    double var; // population variance of the sample mean numerator
    long n;
};

MeanVar mean_var(const std::vector<double>& xs) {
    const long n = long(xs.size());
    double m = 0;
    for (double x : xs) m += x;
    m /= double(n);
    double v = 0;
    for (double x : xs) v += (x - m) * (x - m);
    v /= double(n > 1 ? n - 1 : 1);
    return {m, v, n};
}

} // namespace

NormEstimate estimate_norm(const PathEnsemble& ens, char which, double p) {
    if (which != 'Z' && which != 'W')
        throw std::invalid_argument("estimate_norm: which must be 'Z' or 'W'");
    if (!(p > 0.0)) throw std::invalid_argument("estimate_norm: p must be > 0");
    const std::vector<double>& a = which == 'Z' ? ens.z_x : ens.w_u;
    const std::vector<double>& b = which == 'Z' ? ens.z_y : ens.w_v;
    std::vector<double> powed(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        powed[i] = std::pow(std::hypot(a[i], b[i]), p);
    const MeanVar mv = mean_var(powed);
    NormEstimate est;
    if (mv.mean <= 0.0) return {0.0, 0.0};
    est.value = std::pow(mv.mean, 1.0 / p);
    const double se_mean = std::sqrt(mv.var / double(mv.n));
    est.std_error = (1.0 / p) * std::pow(mv.mean, 1.0 / p - 1.0) * se_mean;
    return est;
}

ExperimentReport inequality_experiment(const MartingaleSpec& spec) {
    const PathEnsemble ens = simulate(spec, /*enforce_hypotheses=*/true);
    const double q = spec.q;
    if (!(q > 1.0) || q > 2.0)
        throw std::invalid_argument("experiment: q must satisfy 1 < q <= 2");

    const std::size_t n = ens.z_x.size();
    std::vector<double> zq(n), wq(n);
    for (std::size_t i = 0; i < n; ++i) {
        zq[i] = std::pow(std::hypot(ens.z_x[i], ens.z_y[i]), q);
        wq[i] = std::pow(std::hypot(ens.w_u[i], ens.w_v[i]), q);
    }
    const MeanVar mz = mean_var(zq);
    const MeanVar mw = mean_var(wq);
    if (!(mw.mean > 0.0))
        throw std::runtime_error("experiment: comparison norm is zero");

    double cov = 0;
    for (std::size_t i = 0; i < n; ++i)
        cov += (zq[i] - mz.mean) * (wq[i] - mw.mean);
    cov /= double(n > 1 ? n - 1 : 1);

    ExperimentReport rep;
    rep.spec = spec;
    rep.ratio = std::pow(mz.mean / mw.mean, 1.0 / q);
    rep.bound = std::sqrt(2.0 / (q * q - q));
    rep.margin = rep.bound - rep.ratio;
    // Paired delta method on (mean z^q, mean w^q).
    const double rel_var = mz.var / (mz.mean * mz.mean) -
                           2.0 * cov / (mz.mean * mw.mean) +
                           mw.var / (mw.mean * mw.mean);
    rep.std_error = rep.ratio / q * std::sqrt(std::max(rel_var, 0.0) / double(n));
    return rep;
}

ItoChainReport ito_chain_check(const MartingaleSpec& spec) {
    const PathEnsemble ens =
        simulate(spec, /*enforce_hypotheses=*/true, /*with_chain=*/true);
    const double factor = std::sqrt(1.5);
    const std::size_t n = ens.z_x.size();
    std::vector<double> lhs_path(n), rhs_path(n), diff(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double wt = std::hypot(ens.w_u[i], ens.w_v[i]);
        const double ft = std::hypot(ens.f_x[i], ens.f_y[i]);
        lhs_path[i] = factor * ens.chain_integral[i];
        rhs_path[i] = (4.0 / 3.0) * std::pow(wt, 1.5) + (2.0 / 3.0) * ft * ft * ft;
        diff[i] = rhs_path[i] - lhs_path[i];
    }
    const MeanVar ml = mean_var(lhs_path);
    const MeanVar mr = mean_var(rhs_path);
    const MeanVar md = mean_var(diff);
    ItoChainReport rep;
    rep.lhs = ml.mean;
    rep.rhs = mr.mean;
    rep.slack = md.mean;
    rep.std_error = std::sqrt(md.var / double(md.n));
    return rep;
}

LemmaReport check_transform_lemmas(std::uint64_t seed, long n_draws) {
    if (n_draws < 1)
        throw std::invalid_argument("transform lemmas: n_draws must be >= 1");
    Rng rng(seed, 0);
    LemmaReport rep{n_draws, 0.0, 0.0};
    for (long i = 0; i < n_draws; ++i) {
        const Vec2 x{rng.next_gaussian(), rng.next_gaussian()};
        const Vec2 y{rng.next_gaussian(), rng.next_gaussian()};
        const double nz = norm_sq(x) + norm_sq(y);
        if (nz == 0.0) continue;
        const auto uv = transform_AZ(x, y);
        const double nw = norm_sq(uv.first) + norm_sq(uv.second);
        const double d = std::fabs(dot(uv.first, uv.second));
        rep.max_abs_dot = std::max(rep.max_abs_dot, d / (nw + 1e-300));
        rep.max_bracket_ratio = std::max(rep.max_bracket_ratio, nw / nz);
    }
    return rep;
}

} // namespace omlab::mart
