#pragma once

#include <complex>
#include <vector>

namespace walsh {

using cplx = std::complex<double>;

/**
 * Closed sampled curve in the plane. Samples are uniform in an abstract
 * parameter (index); the path is closed, samples.front() == samples.back().
 *
 * When the parameterization is known analytically (circle factories, traced
 * boundaries) `tangents` holds dz/dt at each sample over t in [0, 2pi) and
 * quadrature can use the periodic trapezoidal rule directly; otherwise the
 * path is treated as the polygon through its samples.
 */
struct ContourPath {
  std::vector<cplx> samples;
  std::vector<cplx> tangents;  // empty, or same length as samples
  int orientation = +1;        // +1 counterclockwise, -1 clockwise
  double level = std::numeric_limits<double>::quiet_NaN();  // g-level discretized

  // parameter grid for traced boundaries: sample k sits at parameter
  // param_start + k * param_step; NaN step means no parameterization
  double param_start = 0.0;
  double param_step = std::numeric_limits<double>::quiet_NaN();

  size_t segment_count() const { return samples.empty() ? 0 : samples.size() - 1; }
};

/// Counterclockwise circle (clockwise for orientation = -1) with exact tangents.
ContourPath circle_path(cplx center, double radius, int num_samples, int orientation = +1);

/// Total argument increment around z0 divided by 2pi. Requires sampling dense
/// enough that no single step subtends an angle of pi or more at z0.
double winding_number(const ContourPath& path, cplx z0);

/// winding_number rounded; throws AccuracyError when off an integer by > 0.05.
int winding_index(const ContourPath& path, cplx z0);

/// The same polygon with chord midpoints inserted (quadrature refinement;
/// the geometric curve is unchanged). Tangents are dropped: the refined path
/// is a polygon and integrates by the chord rule.
ContourPath refine_midpoints(const ContourPath& path);

}  // namespace walsh
