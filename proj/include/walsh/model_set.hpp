#pragma once

#include <complex>

namespace walsh {

using cplx = std::complex<double>;

/// First Laurent coefficients of the exterior map at infinity,
/// psi(z) = d1*z + d0 + O(1/z), together with the logarithmic capacity.
struct LaurentData {
  double d1;
  double d0;
  double capacity;
};

/**
 * One of the three model compacta with an explicit exterior Riemann map
 * normalized by psi(inf) = inf, psi'(inf) > 0:
 *
 *   disk      closed unit disk,       psi(z) = z
 *   segment   [-1, 1],                psi(z) = z + sqrt(z^2-1),  |psi| > 1
 *   ellipse   closed Joukowski ellipse with exterior parameter R > 1
 *             (semi-axes (R+1/R)/2 and (R-1/R)/2), psi(z) = (z + sqrt(z^2-1))/R
 *
 * The square root is the branch making |psi| > 1 off the set, realized as the
 * product of principal square roots sqrt(z-1)*sqrt(z+1); this is continuous
 * across (-inf,-1] and respects conjugation including signed zeros.
 */
class ModelSet {
 public:
  enum class Kind { disk, segment, ellipse };

  static ModelSet disk() { return ModelSet(Kind::disk, 0.0); }
  static ModelSet segment() { return ModelSet(Kind::segment, 0.0); }
  static ModelSet ellipse(double R);

  Kind kind() const { return kind_; }
  double R() const { return R_; }

  /// Exterior Riemann map. Throws DomainError when z lies in the set.
  cplx riemann_map(cplx z) const;

  /// Derivative of the exterior map at z (same branch).
  cplx riemann_map_deriv(cplx z) const;

  LaurentData laurent() const;

  /// Membership with an absolute slack; tol < 0 shrinks toward the interior.
  /// Default slack is 1e-12 * (1 + |w|).
  bool contains(cplx w, double tol) const;
  bool contains(cplx w) const;

  /// Green's function of the complement with pole at infinity, log|psi(z)|.
  double green(cplx z) const;

  /// Distance proxy to the set boundary in the exterior coordinate:
  /// |psi|-level gap for disk/ellipse, Euclidean distance for the segment.
  double boundary_gap(cplx w) const;

 private:
  ModelSet(Kind k, double R) : kind_(k), R_(R) {}

  Kind kind_;
  double R_;
};

/// Exterior inverse Joukowski branch z + sqrt(z-1)*sqrt(z+1) with |result| >= 1.
cplx inverse_joukowski(cplx z);

}  // namespace walsh
