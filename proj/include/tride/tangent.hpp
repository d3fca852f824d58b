#ifndef TRIDE_TANGENT_HPP
#define TRIDE_TANGENT_HPP

#include <cmath>

#include <Eigen/Core>

#include "tride/geometry.hpp"

namespace tride {

/// Orthonormal basis of the plane orthogonal to a unit direction, as the two
/// columns of a 3x2 matrix. Construction: Gram-Schmidt against the standard
/// axis least aligned with g (first such axis on ties), second column
/// g x first. Deterministic and never degenerate for unit g.
inline Eigen::Matrix<double, 3, 2> tangent_basis(const Direction& g) {
  int axis = 0;
  double smallest = std::abs(g[0]);
  for (int i = 1; i < 3; ++i) {
    if (std::abs(g[i]) < smallest) {
      smallest = std::abs(g[i]);
      axis = i;
    }
  }
  const Eigen::Vector3d e = Eigen::Vector3d::Unit(axis);
  const Eigen::Vector3d u1 = (e - g.dot(e) * g).normalized();
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) = u1;
  basis.col(1) = g.cross(u1);
  return basis;
}

/// Maps a tangent step back to the sphere: normalize(g + U z), canonical
/// sign. Throws DegenerateVector if the sum has norm <= 1e-12.
inline Direction retract(const Direction& g, const Eigen::Matrix<double, 3, 2>& basis,
                         const Eigen::Vector2d& z) {
  return unit_normalize((g + basis * z).eval());
}

}  // namespace tride

#endif  // TRIDE_TANGENT_HPP
