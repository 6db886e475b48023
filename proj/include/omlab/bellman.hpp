#pragma once

#include "omlab/conjugate.hpp"

namespace omlab::bellman {

// One evaluated point of a two-variable Bellman surface B(u, v) on the closed
// first quadrant, carrying everything the Hessian-lift certificates consume.
//
// The mixed second derivative is stored SHIFTED: b_uv_shifted = B_uv + shift,
// with shift = +1 on the implicit surface (and its p = 3 closed form) and
// shift = -1 on the boundary-improved p = 3 surface.  The shifted matrix
// [[b_uu, b_uv_shifted], [b_uv_shifted, b_vv]] is exactly rank one (the
// degenerate Monge-Ampère matrix), so storing the shifted entry keeps the
// degeneracy identity b_uu*b_vv == b_uv_shifted^2 free of cancellation.
// The raw mixed derivative is b_uv_shifted - shift.
struct BellmanPoint {
    double u = 0, v = 0;
    double t = 0;     // implicit parameter t(u, v)
    double value = 0; // B(u, v)
    double b_u = 0, b_v = 0;
    double b_uu = 0, b_vv = 0;
    double b_uv_shifted = 0;
    double shift = 1.0; // +1 or -1
    double S = 0;       // weighted first-order sum driving alpha, beta
    double alpha = 0;   // t'_u / t
    double beta = 0;    // t'_v / t
    double tau = 0;     // alpha/beta on the implicit surface; |alpha|/beta on
                        // the boundary-improved one (always >= 0)

    double b_uv() const { return b_uv_shifted - shift; }
};

// Relative Monge-Ampère defect |b_uu*b_vv - b_uv_shifted^2| / scale.
double det_residual_rel(const BellmanPoint& pt);

// Majorant phi(u,v) = (p-1)(|u|^p/p + |v|^q/q) and the slack phi - B >= 0.
double majorant(const ConjugatePair& pq, double u, double v);
double bound_slack(const ConjugatePair& pq, const BellmanPoint& pt);

// Unique positive solution t of
//     t = (p^{1/p}/q) t^{1/q} u + (p^{1/q}/p) t^{1/p} v ,    (u,v) != (0,0),
// found on the homogeneity-normalized point (max(u^p, v^q) = 1) by
// safeguarded Newton inside a sign-change bracket, then rescaled.
// Relative residual of the returned t is <= tol.
double solve_t(const ConjugatePair& pq, double u, double v, double tol = 1e-12);

// Implicit surface
//     B(u,v) = (p^{1/p}/p) t^{1/q} u + (p^{1/q}/q) t^{1/p} v - uv
// with all derivative data from the analytic formulas (no differencing).
// Negative u or v are folded by the even symmetry of the surface.
// At (0,0) the value is 0 and no derivative data is populated.
BellmanPoint eval_bellman(const ConjugatePair& pq, double u, double v);

// p = 3 closed form of the implicit surface: (2/9)((u^2 + 3v)^{3/2} + |u|^3).
double eval_closed_p3_plus(double u, double v);

// Boundary-system solution: the constants that close the two homogeneous
// Monge-Ampère branches.  branch '+' is the implicit surface's system
// (gamma = 1); branch '-' is the boundary-improved system with C1 < 0.
struct PogorelovSolution {
    char branch; // '+' or '-'
    double p = 0, q = 0;
    double C1 = 0, C2 = 0;
    double gamma = 0;
    double a = 0, b = 0;
    double improvement_c = 0; // minus branch: 2 + C2/C1^2; unused (0) on plus
};

// Plus branch: gamma = 1, C1 = p^{1/p}/p, C2 = p^{1/q}/q, a = q C2, b = p C1.
// All five closure relations are re-verified to 1e-12 before returning; at
// p = 3 additionally confirms by sign scan that gamma = 1 is the unique
// positive solution of 2 sqrt(g) + 1 = 4 - 1/g.
PogorelovSolution solve_pogorelov_plus(const ConjugatePair& pq);

// Minus branch (p > 2): solves delta^{p-1} - (p-1) delta + 2 - p = 0 for
// delta > 1 by bracketed bisection, sets gamma = delta^{p-1},
//   C2 = ( p ((p-1) gamma^{1/(p-1)} - 1)^{p-1} / (gamma - (p-1)) )^{1/p},
//   C1 = -p / C2,   a = 1/p - 1/(q gamma),   b = 1/p - gamma^{q-1}/q,
// improvement_c = 2 + C2/C1^2.  p = 2 degenerates (every delta solves the
// equation) and raises a domain error.
PogorelovSolution solve_pogorelov_minus(const ConjugatePair& pq);

// Boundary-improved p = 3 surface
//     B(u,v) = (2/27)((C1^2 u^2 + 3 C2 v)^{3/2} + C1^3 u^3),
// with gradient, Hessian (shift -1), t, S, alpha, beta, tau populated from
// the closed-form derivative formulas.  Requires a minus-branch solution at
// p = 3.  The surface is edge-degenerate at v = 0 (t = 0, tau = 0); alpha and
// beta are populated only for v > 0.
BellmanPoint eval_closed_p3_minus(double u, double v, const PogorelovSolution& sol);

// Saturation scan of the implicit surface against its majorant: on the curve
// v^q = u^p the surface touches phi with matching gradient; off the curve
// phi - B stays nonnegative.
struct SaturationReport {
    double max_abs_diff_on_curve;  // max |B - phi| / scale on the curve
    double max_grad_mismatch;      // max |grad B - grad phi| / |grad phi| on the curve
    double min_gap_off_curve;      // min normalized (phi - B) over the grid,
                                   // excluding a narrow log-band around the
                                   // contact curve (attributed to the curve)
    double worst_curve_u;          // argmax location for the value mismatch
    double worst_gap_u, worst_gap_v;
};
SaturationReport check_saturation(const ConjugatePair& pq, int n_curve, int n_grid,
                                  double lo = 1e-2, double hi = 1e2);

} // namespace omlab::bellman
