#pragma once

#include <functional>
#include <span>
#include <vector>

#include "walsh/contour.hpp"
#include "walsh/model_set.hpp"
#include "walsh/polynomial.hpp"

namespace walsh {

/**
 * Green's function of the complement of E = P^{-1}(Omega) with pole at
 * infinity: g_E(z) = (1/n) log|psi(P(z))|. Throws DomainError when P(z)
 * lies in Omega.
 */
double green_E(const Polynomial& P, const ModelSet& omega, cplx z);

/// Same formula evaluated without the membership guard. Coincides with g_E on
/// the exterior and continues continuously through E (nonpositive there), so
/// level sets {g = t}, t > 0, can be contoured on a grid.
double green_E_extended(const Polynomial& P, const ModelSet& omega, cplx z);

/// Logarithmic derivative 2 dg_E/dz = (1/n) psi'(P(z)) P'(z) / psi(P(z)).
cplx dz_green_E(const Polynomial& P, const ModelSet& omega, cplx z);

/// g_L(w) = sum m_j log|w - a_j| - log(capacity). Throws DomainError at a center.
double green_L(std::span<const cplx> centers, std::span<const double> weights,
               double capacity, cplx w);

/// 2 dg_L/dw = sum m_j / (w - a_j). Throws DomainError within 1e-13 scale of a pole.
cplx dw_green_L(std::span<const cplx> centers, std::span<const double> weights, cplx w);

/**
 * Either Green's function, packaged for contour integration of its
 * logarithmic differential.
 */
class GreenField {
 public:
  static GreenField preimage(Polynomial P, ModelSet omega);
  static GreenField lemniscatic(std::vector<cplx> centers, std::vector<double> weights,
                                double capacity);

  double value(cplx z) const;
  cplx dlog(cplx z) const;  // 2 dg/dz

 private:
  GreenField(Polynomial P, ModelSet omega)
      : has_preimage_(true), p_(std::move(P)), omega_(omega), capacity_(0.0) {}
  GreenField(std::vector<cplx> c, std::vector<double> w, double cap)
      : has_preimage_(false),
        omega_(ModelSet::disk()),
        centers_(std::move(c)),
        weights_(std::move(w)),
        capacity_(cap) {}

  bool has_preimage_;
  Polynomial p_;
  ModelSet omega_;
  std::vector<cplx> centers_;
  std::vector<double> weights_;
  double capacity_;
};

/**
 * (1/2pi i) contour integral of (2 dg) dz over the path, one quadrature pass:
 * the periodic trapezoidal rule when the path carries tangents, the chord
 * (polygon) trapezoidal rule otherwise. The value is a real period; throws
 * AccuracyError when the imaginary part exceeds 1e-8.
 */
double contour_period(const GreenField& field, const ContourPath& path);

/// (1/2pi i) contour integral of f(z) (2 dg) dz, same quadrature rules.
cplx contour_moment(const GreenField& field, const ContourPath& path,
                    const std::function<cplx(cplx)>& f);

/// f supplied as samples aligned with path.samples.
cplx contour_moment(const GreenField& field, const ContourPath& path,
                    std::span<const cplx> f_values);

/**
 * contour_period with automatic sample doubling (polygon midpoint refinement,
 * which leaves the integration domain unchanged) until successive values agree
 * to 1e-9 and the imaginary part is below 1e-8. Throws AccuracyError when the
 * refinement cap is hit first.
 */
double period_refined(const GreenField& field, const ContourPath& path);

/// Same refinement loop for moments; f is re-evaluated at inserted nodes in
/// path order, so stateful continuation-based f works.
cplx moment_refined(const GreenField& field, const ContourPath& path,
                    const std::function<cplx(cplx)>& f, double tol = 1e-9);

}  // namespace walsh
