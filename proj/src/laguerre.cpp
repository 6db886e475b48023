#include "omlab/laguerre.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace omlab::laguerre {

namespace {

constexpr int kMaxTerms = 500;
constexpr double kTermTol = 1e-16;

} // namespace

SeriesEval eval_all(double p, double s) {
    if (!std::isfinite(p) || !std::isfinite(s))
        throw std::domain_error("laguerre eval: non-finite input");
    if (!(p > 0.0))
        throw std::domain_error("laguerre eval: exponent must be positive");

    // Series sum_j a_j s^j with a_0 = 1, a_{j+1} = a_j (j - p)/(j+1)^2,
    // differentiated term by term.  For integer p the recurrence hits an
    // exact zero and the loop terminates with the polynomial.
    double a_j = 1.0;   // a_j
    double s_jm1 = 0.0; // s^{j-1} (unused while j = 0)
    double s_j = 1.0;   // s^j
    double value = 1.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double max_mag = 1.0;
    int terms = 1;
    int tiny_streak = 0;
    for (int j = 0; j < kMaxTerms; ++j) {
        const double a_j1 = a_j * (j - p) / ((j + 1.0) * (j + 1.0));
        const double s_j1 = s_j * s;
        const double term = a_j1 * s_j1;
        value += term;
        d1 += (j + 1.0) * a_j1 * s_j;
        if (j >= 1) d2 += (j + 1.0) * j * a_j1 * s_jm1;
        ++terms;

        if (a_j1 == 0.0) break; // exact polynomial termination
        const double mag = std::fabs(term);
        if (mag > max_mag) max_mag = mag;
        // Two consecutive negligible terms guard against a lone zero
        // crossing of the alternating tail.
        tiny_streak = (mag < kTermTol * max_mag) ? tiny_streak + 1 : 0;
        if (tiny_streak >= 2) break;

        a_j = a_j1;
        s_jm1 = s_j;
        s_j = s_j1;
    }
    return SeriesEval{value, d1, d2, terms};
}

double eval(double p, double s) { return eval_all(p, s).value; }

double ode_residual(double p, double s) {
    const SeriesEval e = eval_all(p, s);
    return s * e.d2 + (1.0 - s) * e.d1 + p * e.value;
}

double least_positive_root(double p, double scan_step, double tol) {
    if (!(p > 1.0))
        throw std::domain_error("least positive root: requires exponent > 1");
    if (!(scan_step > 0.0) || !(scan_step < 1.0))
        throw std::domain_error("least positive root: scan step must lie in (0,1)");

    // L_p(0) = 1 > 0; march until the first non-positive sample.
    double lo = 0.0;
    double f_lo = 1.0;
    double hi = 0.0;
    bool bracketed = false;
    for (double s = scan_step; s < 1.0; s += scan_step) {
        const double f = eval(p, s);
        if (f == 0.0) return s;
        if (f < 0.0) {
            hi = s;
            bracketed = true;
            break;
        }
        lo = s;
        f_lo = f;
    }
    if (!bracketed) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "no root in unit interval for exponent %.6g (scan step %.3g)",
                      p, scan_step);
        throw std::runtime_error(msg);
    }

    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = eval(p, mid);
        if (f_mid == 0.0) return mid;
        if ((f_lo > 0.0) == (f_mid > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LaguerreSolution solve(double p) {
    const double z = least_positive_root(p);
    const double sqrt2 = std::sqrt(2.0);
    return LaguerreSolution{
        p,
        z,
        z / (sqrt2 * (1.0 - z)),
        sqrt2 * (1.0 - z) / z,
    };
}

BurkholderConstants burkholder_constants(const ConjugatePair& pq) {
    return BurkholderConstants{
        std::sqrt((pq.p * pq.p - pq.p) / 2.0),
        std::sqrt(2.0 / (pq.q * pq.q - pq.q)),
    };
}

std::vector<ConjectureRow> conjecture_table(const std::vector<double>& p_values) {
    std::vector<ConjectureRow> rows;
    rows.reserve(p_values.size());
    for (const double p : p_values) {
        if (!(p >= 2.0))
            throw std::domain_error("conjecture table: rows are keyed by the large "
                                    "exponent and require p >= 2");
        const ConjugatePair pq = ConjugatePair::from_p(p);
        ConjectureRow row{};
        row.p = pq.p;
        row.q = pq.q;
        try {
            const LaguerreSolution sp = solve(pq.p);
            // At p = 2 the conjugate root coincides; skip the duplicate solve
            // so the p = 2 row is exactly symmetric.
            const LaguerreSolution sq = (pq.q == pq.p) ? sp : solve(pq.q);
            row.z_p = sp.z_p;
            row.z_q = sq.z_p;
            row.c_left = sq.c_left;
            row.c_right = sp.c_right;
            row.gap = row.c_left - row.c_right;
            row.failed = false;
        } catch (const std::exception&) {
            row.failed = true;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace omlab::laguerre
