#pragma once

#include "omlab/bellman.hpp"
#include "omlab/vec2.hpp"

namespace omlab::lift {

using omlab::Vec2;

// Positive split of Q = A x^2 + 2 B x y + C y^2 with A, C > 0, AC >= B^2:
//     Q = D (tau x^2 + y^2/tau) + |B| tau (x + sign(B) y/tau)^2,
//     D = sqrt(AC) - |B|,   tau = sqrt(A/C).
// D is the largest constant with Q >= 2 D |x||y| (attained at y/x = tau).
struct QuadraticFormDecomposition {
    double A, B, C;
    double D;
    double tau;
};
QuadraticFormDecomposition decompose_form(double A, double B, double C);
double reconstruct(const QuadraticFormDecomposition& d, double x, double y);

// A four-variable point y = (y1, y2) in R^2 x R^2 with pair norms
// x_i = |y_i| > 0 and the base surface data at (x1, x2).  The lifted scalar
// function is BB(y) := B(|y1|, |y2|).
struct LiftedPoint {
    Vec2 y1, y2;
    double x1, x2;
    bellman::BellmanPoint base;
    ConjugatePair pq{2.0, 2.0};
};
LiftedPoint make_lifted(const ConjugatePair& pq, const Vec2& y1, const Vec2& y2);

// Radial and rotational components of a direction at a lifted point:
//   P_i = <y_i, dy_i> / x_i,   T_i = (y_{i2} dy_{i1} - y_{i1} dy_{i2}) / x_i,
// with |dy_i|^2 = P_i^2 + T_i^2 in two dimensions.
struct DirectionSplit {
    double P1, T1, P2, T2;
};
DirectionSplit split_direction(const LiftedPoint& pt, const Vec2& dy1, const Vec2& dy2);

// Second derivative of the lifted function along (dy1, dy2):
//   d^2 BB = B_uu P1^2 + 2 B_uv P1 P2 + B_vv P2^2
//          + (B_u/x1) T1^2 + (B_v/x2) T2^2
// (base Hessian on the radial projections plus the radial gradient
// corrections on the rotational parts).  Uses the raw mixed entry.
double lifted_hessian_apply(const LiftedPoint& pt, const Vec2& dy1, const Vec2& dy2);

// Term-by-term sum-of-squares certificate for the lifted implicit surface:
//   d^2 BB = tau |dy1|^2 + (1/tau) |dy2|^2
//          + (B_v/x2 - 1/tau) T2^2
//          + tau (m alpha beta - 1) (P1 + P2/tau)^2,    m = S/(pq).
// Every term is nonnegative wherever tau > 0, x2 > 0 (the coefficient
// m alpha beta - 1 equals the raw mixed derivative, which is >= 0 on the
// implicit surface).
struct CertificateTerms {
    double term_tau;        // tau |dy1|^2
    double term_inv_tau;    // (1/tau) |dy2|^2
    double term_rotational; // (B_v/x2 - 1/tau) T2^2
    double term_square;     // tau (m alpha beta - 1) (P1 + P2/tau)^2
    double total;
};
CertificateTerms certificate_terms(const LiftedPoint& pt, const Vec2& dy1, const Vec2& dy2);

// Same certificate at p = 3 assembled purely from the closed-form
// coefficients tau = (2/3)(sqrt(x1^2+3x2) + x1), rotational coefficient
// 3 tau/(4 x2), square coefficient tau x1 / sqrt(x1^2 + 3 x2) — an
// independent route that must agree with certificate_terms and with
// lifted_hessian_apply on the implicit surface at p = 3.
CertificateTerms certificate_p3(const Vec2& y1, const Vec2& y2,
                                const Vec2& dy1, const Vec2& dy2);

// Grid minimum of the rotational-coefficient slack.
// branch '+': slack = 3 tau/(4 x2) + 2/tau - 3/tau with the p = 3 implicit
//   tau (algebraically equal to x1/x2, so the minimum is 0 at x1 -> 0).
// branch '-': slack = 3 C2 tau/(4 C1^2 x2) + 2/tau - c/tau with the
//   boundary-improved tau and c = 2 + C2/C1^2.
struct TauConditionReport {
    double min_slack;
    double at_x1, at_x2;
};
TauConditionReport check_tau_condition(char branch, int n_grid,
                                       double lo = 1e-2, double hi = 1e2);

// Paired lower bound under the orthonormality constraints
//   dy2[0] dy2[1] + dy2'[0] dy2'[1] = 0,
//   dy2[0]^2 + dy2'[0]^2 = dy2[1]^2 + dy2'[1]^2:
// lhs  = d^2 BB(dy) + d^2 BB(dy'),
// rhs  = 2 sqrt(p/2) xi1 xi2,
//   xi1^2 = |dy1|^2 + |dy1'|^2,  xi2^2 = |dy2|^2 + |dy2'|^2.
// Constraint violation beyond 1e-12*scale raises an invalid_argument naming
// the violated constraint.
struct KeyInequalityResult {
    double lhs;
    double rhs;
    double slack; // lhs - rhs
    double xi1, xi2;
};
KeyInequalityResult key_inequality_pair(const LiftedPoint& pt,
                                        const Vec2& dy1, const Vec2& dy2,
                                        const Vec2& dy1p, const Vec2& dy2p);

// Scalar identity behind the pairing: if u.v = 0 and |u| = |v| then
//   V^2 u1^2 + U^2 v1^2 + V^2 u2^2 + U^2 v2^2 = (1/2)(U^2+V^2)(|u|^2+|v|^2).
struct OrthogonalityIdentity {
    double lhs;
    double rhs;
};
OrthogonalityIdentity orthogonality_identity(double U, double V,
                                             const Vec2& u, const Vec2& v);

} // namespace omlab::lift
