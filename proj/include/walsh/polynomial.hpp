#pragma once

#include <complex>
#include <span>
#include <vector>

namespace walsh {

using cplx = std::complex<double>;

/**
 * Dense polynomial with complex coefficients, stored in ascending order:
 * p(z) = c[0] + c[1] z + ... + c[n] z^n.
 *
 * The coefficient vector is normalized on construction so that the leading
 * coefficient is nonzero (trailing zero coefficients are stripped). The zero
 * polynomial is represented by the single coefficient 0 and has degree 0.
 */
class Polynomial {
 public:
  Polynomial() : c_{cplx(0.0)} {}
  explicit Polynomial(std::vector<cplx> coeffs);

  // Monic-times-leading product of (z - r) over the given roots.
  static Polynomial from_roots(cplx leading, std::span<const cplx> roots);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return c_; }

  // Coefficient of z^k, 0 for k > degree.
  cplx coeff(int k) const;
  cplx leading() const { return c_.back(); }

  // Horner evaluation.
  cplx operator()(cplx z) const;

  // Derivative value at z, same Horner pass.
  cplx deriv(cplx z) const;

  Polynomial derivative() const;

  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(cplx constant) const;

  // Max coefficient magnitude.
  double coeff_norm() const;

 private:
  std::vector<cplx> c_;
};

/**
 * All roots of p counted with multiplicity (list of length degree).
 *
 * Simultaneous (Aberth-type) iteration from a deterministic start circle.
 * Close roots are clustered and replaced by the cluster mean, repeated
 * according to cluster size; the result is sorted by (Re, Im).
 *
 * Each returned root r satisfies |p(r)| <= tol * (1 + max|c_k| * (1+|r|)^n).
 * Throws ConvergenceError (with best iterate and residual) otherwise.
 */
std::vector<cplx> roots(const Polynomial& p, double tol = 1e-12);

// Warm-started variant; `init` must have size == degree.
std::vector<cplx> roots(const Polynomial& p, double tol, std::span<const cplx> init);

struct RootCluster {
  cplx value;
  int multiplicity;
};

// Roots grouped by proximity: members within cluster_radius_factor * (1 + max|root|)
// of each other are averaged. Sorted by (Re, Im).
std::vector<RootCluster> clustered_roots(const Polynomial& p, double tol = 1e-12,
                                         double cluster_radius_factor = 1e-6);

// Roots of p' with multiplicity, as clusters. Throws DomainError for constants.
std::vector<RootCluster> critical_points(const Polynomial& p, double tol = 1e-12);

}  // namespace walsh
