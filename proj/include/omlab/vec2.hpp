#pragma once

#include <array>

namespace omlab {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm_sq(const Vec2& a) { return dot(a, a); }

} // namespace omlab
