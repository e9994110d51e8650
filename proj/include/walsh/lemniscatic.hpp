#pragma once

#include "walsh/preimage.hpp"
#include "walsh/scheme.hpp"

namespace walsh {

/// cap(E) = (cap(Omega) / |p_n|)^{1/n} for E = P^{-1}(Omega).
double capacity(const Polynomial& P, const ModelSet& omega);

/**
 * Independent quality measures for a candidate scheme.
 *
 * The decisive quantity is the center moment: for the true scheme,
 * (1/2pi i) contour integral of Phi(z) (2 dg_E) dz around component j equals
 * m_j a_j, with Phi obtained by continuation against the candidate's own Q.
 * A wrong candidate satisfies the defining equation identically but fails
 * this pointwise correspondence (or loses the fiber outright, which counts
 * as an infinite residual).
 */
struct ValidationReport {
  double constraint_residual = 0.0;  // |sum n_j a_j + p_{n-1}/p_n| / scale
  double moment_residual = 0.0;      // worst |moment_j - m_j a_j| / scale
  double identity_residual = 0.0;    // defining equation at a probe point

  double worst() const;
};

ValidationReport validate_scheme(const Polynomial& P, const ModelSet& omega,
                                 const PreimageStructure& structure,
                                 const LemniscaticScheme& scheme);

/**
 * Lemniscatic data of E = P^{-1}(Omega), dispatched through the closed-form
 * families before falling back to Newton's method on the saddle equations:
 *
 *   linear           degree one
 *   monomial_family  P = alpha (z-beta)^n + gamma
 *   connected        one component (single center from the linear relation)
 *   fixed_point      disk target, one root cluster per component (L = E)
 *   two_components   explicit n-th root through the joining saddle
 *   general_newton   saddle-value matching plus the linear relation
 *
 * Centers are returned in component order (centers[j] belongs to
 * structure.contours[j]). Every result is validated before being returned;
 * candidates that merely satisfy the defining equation are rejected by the
 * center-moment test. Throws AmbiguityError when several branch candidates
 * validate, ConvergenceError when none does.
 */
LemniscaticScheme solve(const Polynomial& P, const ModelSet& omega,
                        const PreimageStructure& structure);

/// Convenience overload running analyze() first.
LemniscaticScheme solve(const Polynomial& P, const ModelSet& omega);

}  // namespace walsh
