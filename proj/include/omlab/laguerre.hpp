#pragma once

#include <vector>

#include "omlab/conjugate.hpp"

namespace omlab::laguerre {

// Bounded solution L_p of the Laguerre-type equation
//
//     s L''(s) + (1 - s) L'(s) + p L(s) = 0,      L_p(0) = 1,
//
// evaluated as the power series sum_k a_k s^k with a_0 = 1 and
// a_{k+1} = a_k (k - p) / (k+1)^2 (the solution regular at s = 0; the second,
// logarithmically singular solution is never needed here).  For integer p the
// series terminates and L_p is the classical Laguerre polynomial.
struct SeriesEval {
    double value; // L_p(s)
    double d1;    // L_p'(s)
    double d2;    // L_p''(s)
    int terms;    // number of series terms accumulated
};

SeriesEval eval_all(double p, double s);
double eval(double p, double s);

// Residual of the defining equation at s, from the analytic series
// derivatives: s*d2 + (1-s)*d1 + p*value.
double ode_residual(double p, double s);

// Least positive root z_p of L_p together with both constant legs:
//   c_right = sqrt(2) (1 - z_p) / z_p        (the p >= 2 form)
//   c_left  = z_p / (sqrt(2) (1 - z_p))      (the 1 < p <= 2 form)
// Both are always computed from the same root; pairing constants across
// conjugate exponents happens only in conjecture_table.
struct LaguerreSolution {
    double p;
    double z_p;
    double c_left;
    double c_right;
};

// Brackets the first sign change of L_p on (0, 1) by a scan of step
// scan_step, then bisects the bracket down to width tol.  Throws a
// runtime_error reporting the scan resolution when no sign change exists
// on the unit interval.
double least_positive_root(double p, double scan_step = 1e-3, double tol = 1e-12);
LaguerreSolution solve(double p);

// Martingale-comparison reference constants for the pair:
//   ( sqrt((p^2 - p)/2),  sqrt(2/(q^2 - q)) ).
struct BurkholderConstants {
    double p_leg; // sqrt((p^2 - p)/2)
    double q_leg; // sqrt(2/(q^2 - q))
};
BurkholderConstants burkholder_constants(const ConjugatePair& pq);

// One row of the root-constant comparison table: the p >= 2 constant from
// z_p against the 1 < q <= 2 constant from z_q, gap = c_left(q) - c_right(p).
// Equality of the two legs is an open conjecture; no tolerance is asserted
// except gap == 0 at p = 2, which is forced algebraically.
struct ConjectureRow {
    double p;
    double q;
    double z_p;
    double z_q;
    double c_left;  // from the root of L_q
    double c_right; // from the root of L_p
    double gap;     // c_left - c_right
    bool failed;    // root finder failed for this row
};
std::vector<ConjectureRow> conjecture_table(const std::vector<double>& p_values);

} // namespace omlab::laguerre
