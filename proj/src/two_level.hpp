#pragma once

#include <cmath>

#include "qnetsim/linalg.hpp"

namespace qnetsim::detail {

// Unit eigenvector of [[a, t], [conj(t), b]] for eigenvalue e, built from
// whichever row of (H - e) gives the better-conditioned null vector.
inline ComplexVector two_level_eigenvector(double a, double b, Complex t, double e) {
  ComplexVector u(2), w(2);
  u << t, e - a;
  w << e - b, std::conj(t);
  ComplexVector v = u.norm() >= w.norm() ? u : w;
  return fix_phase(v / v.norm());
}

inline double half_splitting(double a, double b, Complex t) {
  return std::sqrt(0.25 * (b - a) * (b - a) + std::norm(t));
}

}  // namespace qnetsim::detail
