#include "omlab/lift.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace omlab::lift {

QuadraticFormDecomposition decompose_form(double A, double B, double C) {
    if (!(A > 0.0) || !(C > 0.0))
        throw std::domain_error("form split: diagonal entries must be positive");
    const double root = std::sqrt(A * C);
    const double absB = std::fabs(B);
    if (root - absB < -1e-12 * (root + absB))
        throw std::domain_error("form split: form is not positive semidefinite");
    QuadraticFormDecomposition d;
    d.A = A;
    d.B = B;
    d.C = C;
    d.D = root - absB;
    d.tau = std::sqrt(A / C);
    return d;
}

double reconstruct(const QuadraticFormDecomposition& d, double x, double y) {
    const double s = d.B >= 0.0 ? 1.0 : -1.0;
    const double w = x + s * y / d.tau;
    return d.D * (d.tau * x * x + y * y / d.tau) + std::fabs(d.B) * d.tau * w * w;
}

LiftedPoint make_lifted(const ConjugatePair& pq, const Vec2& y1, const Vec2& y2) {
    LiftedPoint pt;
    pt.y1 = y1;
    pt.y2 = y2;
    pt.x1 = std::sqrt(norm_sq(y1));
    pt.x2 = std::sqrt(norm_sq(y2));
    if (!(pt.x1 > 0.0) || !(pt.x2 > 0.0))
        throw std::domain_error("lifted point: both pair norms must be positive");
    pt.base = bellman::eval_bellman(pq, pt.x1, pt.x2);
    pt.pq = pq;
    return pt;
}

DirectionSplit split_direction(const LiftedPoint& pt, const Vec2& dy1, const Vec2& dy2) {
    DirectionSplit s;
    s.P1 = (pt.y1[0] * dy1[0] + pt.y1[1] * dy1[1]) / pt.x1;
    s.T1 = (pt.y1[1] * dy1[0] - pt.y1[0] * dy1[1]) / pt.x1;
    s.P2 = (pt.y2[0] * dy2[0] + pt.y2[1] * dy2[1]) / pt.x2;
    s.T2 = (pt.y2[1] * dy2[0] - pt.y2[0] * dy2[1]) / pt.x2;
    return s;
}

double lifted_hessian_apply(const LiftedPoint& pt, const Vec2& dy1, const Vec2& dy2) {
    const DirectionSplit s = split_direction(pt, dy1, dy2);
    const bellman::BellmanPoint& b = pt.base;
    return b.b_uu * s.P1 * s.P1 + 2.0 * b.b_uv() * s.P1 * s.P2 +
           b.b_vv * s.P2 * s.P2 + (b.b_u / pt.x1) * s.T1 * s.T1 +
           (b.b_v / pt.x2) * s.T2 * s.T2;
}

CertificateTerms certificate_terms(const LiftedPoint& pt, const Vec2& dy1,
                                   const Vec2& dy2) {
    const DirectionSplit s = split_direction(pt, dy1, dy2);
    const bellman::BellmanPoint& b = pt.base;
    if (!(b.tau > 0.0))
        throw std::domain_error("certificate: tau must be positive at the point");
    CertificateTerms t;
    t.term_tau = b.tau * (s.P1 * s.P1 + s.T1 * s.T1);
    t.term_inv_tau = (s.P2 * s.P2 + s.T2 * s.T2) / b.tau;
    t.term_rotational = (b.b_v / pt.x2 - 1.0 / b.tau) * s.T2 * s.T2;
    const double w = s.P1 + s.P2 / b.tau;
    t.term_square = b.tau * b.b_uv() * w * w;
    t.total = t.term_tau + t.term_inv_tau + t.term_rotational + t.term_square;
    return t;
}

CertificateTerms certificate_p3(const Vec2& y1, const Vec2& y2, const Vec2& dy1,
                                const Vec2& dy2) {
    const double x1 = std::sqrt(norm_sq(y1));
    const double x2 = std::sqrt(norm_sq(y2));
    if (!(x1 > 0.0) || !(x2 > 0.0))
        throw std::domain_error("certificate: both pair norms must be positive");

    // Closed-form p = 3 coefficients, assembled without the implicit solve.
    const double R = x1 * x1 + 3.0 * x2;
    const double rt = std::sqrt(R);
    const double tau = (2.0 / 3.0) * (rt + x1);

    const double P1 = (y1[0] * dy1[0] + y1[1] * dy1[1]) / x1;
    const double T1 = (y1[1] * dy1[0] - y1[0] * dy1[1]) / x1;
    const double P2 = (y2[0] * dy2[0] + y2[1] * dy2[1]) / x2;
    const double T2 = (y2[1] * dy2[0] - y2[0] * dy2[1]) / x2;

    CertificateTerms t;
    t.term_tau = tau * (P1 * P1 + T1 * T1);
    t.term_inv_tau = (P2 * P2 + T2 * T2) / tau;
    t.term_rotational = (3.0 * tau / (4.0 * x2)) * T2 * T2;
    const double w = P1 + P2 / tau;
    t.term_square = (tau * x1 / rt) * w * w;
    t.total = t.term_tau + t.term_inv_tau + t.term_rotational + t.term_square;
    return t;
}

TauConditionReport check_tau_condition(char branch, int n_grid, double lo, double hi) {
    if (n_grid < 2)
        throw std::invalid_argument("tau condition: need at least a 2x2 grid");
    const ConjugatePair pq = ConjugatePair::from_p(3.0);
    const double log_lo = std::log(lo), log_hi = std::log(hi);

    TauConditionReport rep;
    rep.min_slack = HUGE_VAL;
    rep.at_x1 = 0.0;
    rep.at_x2 = 0.0;

    bellman::PogorelovSolution sol{};
    double c = 3.0; // plus branch: require rot-coefficient >= (c - 2)/tau with c = p
    if (branch == '-') {
        sol = bellman::solve_pogorelov_minus(pq);
        c = sol.improvement_c;
    } else if (branch != '+') {
        throw std::invalid_argument("tau condition: branch must be '+' or '-'");
    }

    for (int i = 0; i < n_grid; ++i) {
        const double x1 = std::exp(log_lo + (log_hi - log_lo) * i / double(n_grid - 1));
        for (int j = 0; j < n_grid; ++j) {
            const double x2 =
                std::exp(log_lo + (log_hi - log_lo) * j / double(n_grid - 1));
            double slack;
            if (branch == '+') {
                const bellman::BellmanPoint pt = bellman::eval_bellman(pq, x1, x2);
                slack = 3.0 * pt.tau / (4.0 * x2) + 2.0 / pt.tau - c / pt.tau;
            } else {
                const bellman::BellmanPoint pt =
                    bellman::eval_closed_p3_minus(x1, x2, sol);
                slack = 3.0 * sol.C2 * pt.tau / (4.0 * sol.C1 * sol.C1 * x2) +
                        2.0 / pt.tau - c / pt.tau;
            }
            if (slack < rep.min_slack) {
                rep.min_slack = slack;
                rep.at_x1 = x1;
                rep.at_x2 = x2;
            }
        }
    }
    return rep;
}

KeyInequalityResult key_inequality_pair(const LiftedPoint& pt, const Vec2& dy1,
                                        const Vec2& dy2, const Vec2& dy1p,
                                        const Vec2& dy2p) {
    const double scale = norm_sq(dy2) + norm_sq(dy2p);
    const double c_prod = dy2[0] * dy2[1] + dy2p[0] * dy2p[1];
    const double c_len = (dy2[0] * dy2[0] + dy2p[0] * dy2p[0]) -
                         (dy2[1] * dy2[1] + dy2p[1] * dy2p[1]);
    if (std::fabs(c_prod) > 1e-12 * scale)
        throw std::invalid_argument(
            "pairing constraint violated: component products must cancel");
    if (std::fabs(c_len) > 1e-12 * scale)
        throw std::invalid_argument(
            "pairing constraint violated: component lengths must agree");

    KeyInequalityResult r;
    r.lhs = lifted_hessian_apply(pt, dy1, dy2) + lifted_hessian_apply(pt, dy1p, dy2p);
    r.xi1 = std::sqrt(norm_sq(dy1) + norm_sq(dy1p));
    r.xi2 = std::sqrt(scale);
    r.rhs = 2.0 * std::sqrt(pt.pq.p / 2.0) * r.xi1 * r.xi2;
    r.slack = r.lhs - r.rhs;
    return r;
}

OrthogonalityIdentity orthogonality_identity(double U, double V, const Vec2& u,
                                             const Vec2& v) {
    const double dot_uv = u[0] * v[0] + u[1] * v[1];
    const double len_gap = norm_sq(u) - norm_sq(v);
    const double scale = norm_sq(u) + norm_sq(v);
    if (std::fabs(dot_uv) > 1e-12 * scale || std::fabs(len_gap) > 1e-12 * scale)
        throw std::invalid_argument(
            "rotation identity: vectors must be orthogonal with equal length");
    OrthogonalityIdentity id;
    id.lhs = V * V * u[0] * u[0] + U * U * v[0] * v[0] + V * V * u[1] * u[1] +
             U * U * v[1] * v[1];
    id.rhs = 0.5 * (U * U + V * V) * (norm_sq(u) + norm_sq(v));
    return id;
}

} // namespace omlab::lift
