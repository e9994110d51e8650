#include "walsh/contour.hpp"

#include <cmath>

#include "walsh/errors.hpp"

namespace walsh {

ContourPath circle_path(cplx center, double radius, int num_samples, int orientation) {
  ContourPath path;
  path.orientation = orientation;
  path.samples.resize(static_cast<size_t>(num_samples) + 1);
  path.tangents.resize(static_cast<size_t>(num_samples) + 1);
  const double sign = orientation >= 0 ? 1.0 : -1.0;
  // tangents already point along the traversal; the parameter runs forward
  path.param_start = 0.0;
  path.param_step = 6.283185307179586 / num_samples;
  for (int k = 0; k <= num_samples; ++k) {
    const double t = sign * 6.283185307179586 * k / num_samples;
    const cplx e(std::cos(t), std::sin(t));
    path.samples[static_cast<size_t>(k)] = center + radius * e;
    path.tangents[static_cast<size_t>(k)] = cplx(0.0, sign) * radius * e;
  }
  path.samples.back() = path.samples.front();  // exact closure
  path.tangents.back() = path.tangents.front();
  return path;
}

double winding_number(const ContourPath& path, cplx z0) {
  double total = 0.0;
  for (size_t k = 0; k + 1 < path.samples.size(); ++k) {
    const cplx a = path.samples[k] - z0;
    const cplx b = path.samples[k + 1] - z0;
    total += std::arg(b / a);
  }
  return total / 6.283185307179586;
}

int winding_index(const ContourPath& path, cplx z0) {
  const double w = winding_number(path, z0);
  const double r = std::round(w);
  if (std::abs(w - r) > 0.05)
    throw AccuracyError("winding number is not close to an integer; sampling too sparse");
  return static_cast<int>(r);
}

ContourPath refine_midpoints(const ContourPath& path) {
  ContourPath out;
  out.orientation = path.orientation;
  out.level = path.level;
  out.samples.reserve(path.samples.size() * 2);
  for (size_t k = 0; k + 1 < path.samples.size(); ++k) {
    out.samples.push_back(path.samples[k]);
    out.samples.push_back(0.5 * (path.samples[k] + path.samples[k + 1]));
  }
  out.samples.push_back(path.samples.back());
  // tangents dropped: the refined object is the polygon through the samples
  return out;
}

}  // namespace walsh
