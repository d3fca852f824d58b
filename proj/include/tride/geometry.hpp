#ifndef TRIDE_GEOMETRY_HPP
#define TRIDE_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

#include "tride/errors.hpp"

namespace tride {

// Unit-sphere primitives shared by every stage of the pipeline. All stored
// directions are unoriented: g and -g name the same line, so storage uses a
// canonical sign and every residual below is invariant under sign flips.

/// Unit 3-vector with canonical sign (first significant component >= 0).
using Direction = Eigen::Vector3d;
/// Camera-frame-to-world rotation, orthonormal with determinant +1.
using Rotation = Eigen::Matrix3d;
/// Upper-triangular intrinsics matrix with nonzero diagonal.
using Calibration = Eigen::Matrix3d;

/// Norms at or below this are treated as zero.
inline constexpr double kDegenerateNorm = 1e-12;
/// Components at or below this (in absolute value) do not decide the
/// canonical sign.
inline constexpr double kCanonicalEps = 1e-9;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Flips the sign, if needed, so the first component with |x| > 1e-9 is
/// non-negative. Storage convention for all unoriented quantities.
template <typename Derived>
Eigen::Vector3<typename Derived::Scalar> canonicalize(
    const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Eigen::Vector3<Scalar> out = v;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(out[i]) > Scalar(kCanonicalEps)) {
      if (out[i] < Scalar(0)) out = -out;
      return out;
    }
  }
  return out;
}

/// v / ||v|| with the canonical sign applied.
/// Throws DegenerateVector when ||v|| <= 1e-12.
template <typename Derived>
Eigen::Vector3<typename Derived::Scalar> unit_normalize(
    const Eigen::MatrixBase<Derived>& v) {
  const auto n = v.norm();
  if (!(n > typename Derived::Scalar(kDegenerateNorm)))
    throw DegenerateVector("unit_normalize: vector norm below cutoff");
  return canonicalize((v / n).eval());
}

/// World-frame viewing ray of a homogeneous pixel measurement:
/// normalize(R * K^-1 * u). Bearings keep their geometric sign (no
/// canonicalization) because their cross product feeds correspondence
/// normals, which are canonicalized afterwards.
template <typename DR, typename DK, typename DU>
Eigen::Vector3<typename DR::Scalar> bearing(const Eigen::MatrixBase<DR>& rot,
                                            const Eigen::MatrixBase<DK>& calib,
                                            const Eigen::MatrixBase<DU>& pixel) {
  using Scalar = typename DR::Scalar;
  const Eigen::Vector3<Scalar> ray =
      rot * calib.template triangularView<Eigen::Upper>().solve(pixel.eval());
  const Scalar n = ray.norm();
  if (!(n > Scalar(kDegenerateNorm)))
    throw DegenerateVector("bearing: degenerate viewing ray");
  return ray / n;
}

/// Normalized cross product of two bearings, canonical sign; empty when the
/// bearings are (near-)parallel and the correspondence carries no direction
/// information.
template <typename DA, typename DB>
std::optional<Eigen::Vector3<typename DA::Scalar>> correspondence_normal(
    const Eigen::MatrixBase<DA>& bearing_i, const Eigen::MatrixBase<DB>& bearing_j) {
  using Scalar = typename DA::Scalar;
  const Eigen::Vector3<Scalar> c = bearing_i.cross(bearing_j);
  const Scalar n = c.norm();
  if (!(n > Scalar(kDegenerateNorm))) return std::nullopt;
  return canonicalize((c / n).eval());
}

/// Unoriented angular point residual arcsin(|g.x|) in [0, pi/2].
/// Zero iff the correspondence normal is orthogonal to the direction, i.e.
/// an exact inlier.
template <typename DG, typename DX>
double angular_residual(const Eigen::MatrixBase<DG>& g,
                        const Eigen::MatrixBase<DX>& x) {
  const double dot = std::abs(static_cast<double>(g.dot(x)));
  return std::asin(std::clamp(dot, 0.0, 1.0));
}

/// Sign-invariant chordal error sqrt(1 - (c.g)^2) in [0, 1]; the norm of the
/// projection of c onto the plane orthogonal to g_star. Evaluated as the
/// cross-product norm, which is exact near 0 where the sqrt form cancels.
template <typename DC, typename DG>
double unoriented_error(const Eigen::MatrixBase<DC>& c,
                        const Eigen::MatrixBase<DG>& g_star) {
  return std::min(1.0, static_cast<double>(c.cross(g_star).norm()));
}

/// Scalar triple product ga . (gb x gc). Vanishes when the three directions
/// are coplanar, which is the triangle-consistency cue.
template <typename DA, typename DB, typename DC>
typename DA::Scalar triple_product(const Eigen::MatrixBase<DA>& ga,
                                   const Eigen::MatrixBase<DB>& gb,
                                   const Eigen::MatrixBase<DC>& gc) {
  return ga.dot(gb.cross(gc));
}

/// Unoriented angle arccos(|g1.g2|) between two directions in degrees, in
/// [0, 90]. Computed as atan2(||g1 x g2||, |g1.g2|): identical value, but
/// exact at 0 where arccos loses eight digits.
template <typename DA, typename DB>
double unoriented_angle_deg(const Eigen::MatrixBase<DA>& g1,
                            const Eigen::MatrixBase<DB>& g2) {
  const double dot = std::abs(static_cast<double>(g1.dot(g2)));
  const double cross = g1.cross(g2).norm();
  return rad_to_deg(std::atan2(cross, dot));
}

}  // namespace tride

#endif  // TRIDE_GEOMETRY_HPP
