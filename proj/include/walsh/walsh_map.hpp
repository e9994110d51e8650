#pragma once

#include <optional>
#include <span>

#include "walsh/preimage.hpp"
#include "walsh/scheme.hpp"

namespace walsh {

/**
 * The exterior conformal map Phi: ext(E) -> ext(L) with Phi(z) = z + O(1/z),
 * evaluated by analytic continuation of the defining equation
 *
 *   Q(Phi(z)) = psi(P(z)).
 *
 * The fiber of Q is followed by a predictor-corrector walk: from an anchor
 * far out (where Phi(z) ~ z pins the branch) the tracker moves along straight
 * segments, solving for the nearby fiber point with Newton's method and
 * halving the step whenever the corrector jumps beyond the predicted move.
 * Segments that would dip into E are bent around it.
 *
 * The tracker keeps its position between calls, so walking many nearby
 * points (a contour, a grid row) costs one short continuation per point.
 */
class PhiTracker {
 public:
  PhiTracker(Polynomial P, ModelSet omega, LemniscaticScheme scheme);

  /// Phi(z), continued from the current position (or freshly anchored).
  /// Throws DomainError when z lies in E, AccuracyError when the
  /// continuation cannot keep hold of the branch.
  cplx eval(cplx z);

  /// Phi'(z) = psi'(P(z)) P'(z) / Q'(w) for w = Phi(z) already computed.
  cplx map_deriv(cplx z, cplx w) const;

  /// Forget the current position; the next eval re-anchors far out.
  void reset();

  /// Continue the image w along a target arc of Q-values from y0 to y1
  /// while z-side information is unavailable (boundary work). The target
  /// moves along the straight chord; steps halve on fiber jumps.
  cplx slide_target(cplx w, cplx y0, cplx y1) const;

 private:
  cplx psi_of(cplx z) const;
  std::optional<cplx> newton_fiber(cplx target, cplx start) const;
  void advance(cplx z_to, int depth);
  std::vector<cplx> escape_route(cplx z) const;
  void route_to(cplx z);

  Polynomial p_;
  Polynomial dp_;
  ModelSet omega_;
  LemniscaticScheme scheme_;
  Polynomial q_;
  Polynomial dq_;
  double scale_;
  cplx root_mean_;
  bool anchored_ = false;
  cplx z_pos_{0.0};
  cplx w_pos_{0.0};
};

/// One-shot continuation: anchor far out, walk to z, return Phi(z).
cplx phi_track(const Polynomial& P, const ModelSet& omega, const LemniscaticScheme& scheme,
               cplx z);

/**
 * Direct evaluation for schemes with an elementary map: identity when L = E
 * (fixed_point), the affine formula in degree one, and the explicit n-th
 * root for one-center and monomial-family schemes (branch fixed by walking
 * the candidate fiber in from far away, no Newton involved). Throws
 * DispatchError for schemes without such a form.
 */
cplx phi_closed_form(const Polynomial& P, const ModelSet& omega, const LemniscaticScheme& scheme,
                     cplx z);

/// A boundary tour of one component of E together with its conformal image
/// on the lemniscate |Q| = 1. Samples correspond index by index.
struct BoundaryMap {
  ContourPath domain;
  ContourPath image;
};

/**
 * Image of the traced component boundary under Phi. The domain tour comes
 * from trace_boundary; the image follows the fiber of Q over the unit-circle
 * targets y(t) = e^{it}, which the boundary correspondence of the exterior
 * maps prescribes. Corners of E are invisible on the image side (the image
 * curve is smooth), so the walk needs no special casing there.
 */
BoundaryMap phi_boundary(const Polynomial& P, const ModelSet& omega,
                         const PreimageStructure& structure, const LemniscaticScheme& scheme,
                         int component, int samples_per_turn = 0);

/**
 * Phi(z) = z - (1/2pi i) sum_j contour integral of (Phi(zeta) - zeta) /
 * (zeta - z) d zeta over the counterclockwise boundary tours: the Cauchy
 * representation of the decaying part of Phi. Independent of the tracker
 * except through the precomputed boundary images. Throws AccuracyError when
 * z is too close to a tour for the sampled integral to be trusted.
 */
cplx phi_cauchy(std::span<const BoundaryMap> boundary, cplx z);

struct IdentityResiduals {
  double map_equation;  // |Q(Phi(z)) - psi(P(z))| / (1 + |psi(P(z))|)
  double green_match;   // |g_E(z) - g_L(Phi(z))|
};

/// Residuals of the defining identity and of the Green's-function transfer
/// at one exterior point, using a fresh tracked value of Phi.
IdentityResiduals check_identity(const Polynomial& P, const ModelSet& omega,
                                 const LemniscaticScheme& scheme, cplx z);

}  // namespace walsh
