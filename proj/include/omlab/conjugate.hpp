#pragma once

#include <cmath>
#include <stdexcept>

namespace omlab {

// Hölder-conjugate exponent pair with the large leg explicit:
//   p >= 2,  1 < q <= 2,  1/p + 1/q = 1.
// All surfaces and certificates in this library are parameterized by the
// large exponent; callers holding the small exponent construct via from_q.
struct ConjugatePair {
    double p;
    double q;

    static ConjugatePair from_p(double p) {
        if (!std::isfinite(p))
            throw std::domain_error("conjugate pair: exponent must be finite");
        if (p < 2.0)
            throw std::domain_error(
                "conjugate pair: large exponent must satisfy p >= 2 "
                "(pass the small exponent via from_q)");
        return ConjugatePair{p, p / (p - 1.0)};
    }

    static ConjugatePair from_q(double q) {
        if (!std::isfinite(q))
            throw std::domain_error("conjugate pair: exponent must be finite");
        if (!(q > 1.0) || q > 2.0)
            throw std::domain_error(
                "conjugate pair: small exponent must satisfy 1 < q <= 2");
        return ConjugatePair{q / (q - 1.0), q};
    }

    // Accepts either leg; exponents >= 2 are taken as p, the rest as q.
    static ConjugatePair from_either(double e) {
        if (!std::isfinite(e) || !(e > 1.0))
            throw std::domain_error("conjugate pair: exponent must be > 1");
        return e >= 2.0 ? from_p(e) : from_q(e);
    }
};

} // namespace omlab
