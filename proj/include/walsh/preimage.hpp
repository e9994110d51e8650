#pragma once

#include <vector>

#include "walsh/contour.hpp"
#include "walsh/model_set.hpp"
#include "walsh/polynomial.hpp"

namespace walsh {

/// Critical point of P whose value falls outside the model set. These are the
/// saddles of the Green's function; the smallest level bounds the contouring
/// level from above.
struct ExteriorCritical {
  cplx point;
  cplx value;        // P(point)
  double level;      // Green's-function value at the saddle, > 0
  int multiplicity;  // as a zero of P'
};

struct AnalyzeOptions {
  int min_grid = 257;      // coarsest samples per axis (odd keeps y = 0 on-grid)
  int max_grid = 2049;     // finest samples per axis before giving up
  double level_cap = 1.0;  // contour at min(level_cap, half the lowest saddle)
};

/**
 * Connected-component structure of E = P^{-1}(Omega). Components are found as
 * the loops of the level curve {g = level} and ordered by centroid (real part
 * first). Each loop is counterclockwise; degrees[j] counts the roots of P it
 * encloses, with multiplicity.
 */
struct PreimageStructure {
  double level = 0.0;
  std::vector<ContourPath> contours;
  std::vector<int> degrees;
  std::vector<std::vector<cplx>> component_roots;
  std::vector<ExteriorCritical> exterior_critical;
  bool conjugation_symmetric = false;      // coefficients are real
  std::vector<bool> component_symmetric;   // component equals its own mirror

  int component_count() const { return static_cast<int>(contours.size()); }
};

/**
 * Locate the components of E on a refining grid. The result is accepted once
 * two consecutive grids agree on the component count and degrees and every
 * audit (loop closure, period integrality, root winding) passes; otherwise
 * throws AccuracyError. Throws DegenerateError when a critical value of P
 * lands on the boundary of the model set.
 */
PreimageStructure analyze(const Polynomial& P, const ModelSet& omega,
                          const AnalyzeOptions& options = {});

/**
 * Boundary of one component, obtained by lifting a parameterization of the
 * boundary of Omega through P. The lift closes after degrees[component] turns;
 * samples are uniform in the parameter and carry tangents dz/dt, so the
 * periodic quadrature rule applies. The loop is returned counterclockwise.
 *
 * For the segment set the lift passes through interior critical points of P;
 * there the curve continues onto the next boundary ray (a corner of E).
 *
 * samples_per_turn <= 0 selects a degree-based default.
 */
ContourPath trace_boundary(const Polynomial& P, const ModelSet& omega,
                           const PreimageStructure& structure, int component,
                           int samples_per_turn = 0);

}  // namespace walsh
