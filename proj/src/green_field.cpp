#include "walsh/green_field.hpp"

#include <cmath>

#include "walsh/errors.hpp"

namespace walsh {

namespace {

// |psi(u)| evaluated without the exterior guard; equals 1 on the segment and
// |u| <= 1 inside the disk, so its log extends the Green's function through E.
double psi_abs_extended(const ModelSet& omega, cplx u) {
  switch (omega.kind()) {
    case ModelSet::Kind::disk:
      return std::abs(u);
    case ModelSet::Kind::segment:
      return std::abs(inverse_joukowski(u));
    case ModelSet::Kind::ellipse:
      return std::abs(inverse_joukowski(u)) / omega.R();
  }
  return std::abs(u);
}

int checked_degree(const Polynomial& P) {
  if (P.degree() < 1) throw DomainError("pre-image of a constant polynomial is not a compact set");
  return P.degree();
}

}  // namespace

double green_E(const Polynomial& P, const ModelSet& omega, cplx z) {
  const int n = checked_degree(P);
  const cplx u = P(z);
  if (omega.contains(u)) throw DomainError("point lies in the polynomial pre-image");
  return omega.green(u) / n;
}

double green_E_extended(const Polynomial& P, const ModelSet& omega, cplx z) {
  const int n = checked_degree(P);
  const double a = std::max(psi_abs_extended(omega, P(z)), 1e-300);
  return std::log(a) / n;
}

cplx dz_green_E(const Polynomial& P, const ModelSet& omega, cplx z) {
  const int n = checked_degree(P);
  const cplx u = P(z);
  if (omega.contains(u)) throw DomainError("point lies in the polynomial pre-image");
  const cplx dp = P.deriv(z);
  if (omega.kind() == ModelSet::Kind::disk) return dp / u / static_cast<double>(n);
  // psi'/psi = 1/sqrt(u^2-1) for both the segment and the ellipse (the 1/R
  // scale cancels); the branch square root is psi_segment(u) - u.
  const cplx s = inverse_joukowski(u) - u;
  return dp / s / static_cast<double>(n);
}

double green_L(std::span<const cplx> centers, std::span<const double> weights,
               double capacity, cplx w) {
  double g = -std::log(capacity);
  for (size_t j = 0; j < centers.size(); ++j) {
    const double d = std::abs(w - centers[j]);
    if (d < 1e-300) throw DomainError("Green's function evaluated at a center");
    g += weights[j] * std::log(d);
  }
  return g;
}

cplx dw_green_L(std::span<const cplx> centers, std::span<const double> weights, cplx w) {
  double scale = 1.0 + std::abs(w);
  for (cplx a : centers) scale = std::max(scale, 1.0 + std::abs(a));
  cplx s(0.0);
  for (size_t j = 0; j < centers.size(); ++j) {
    const cplx d = w - centers[j];
    if (std::abs(d) < 1e-13 * scale)
      throw DomainError("logarithmic derivative evaluated at a pole");
    s += weights[j] / d;
  }
  return s;
}

GreenField GreenField::preimage(Polynomial P, ModelSet omega) {
  checked_degree(P);
  return GreenField(std::move(P), omega);
}

GreenField GreenField::lemniscatic(std::vector<cplx> centers, std::vector<double> weights,
                                   double capacity) {
  if (centers.size() != weights.size() || centers.empty())
    throw DomainError("scheme needs matching nonempty centers and weights");
  return GreenField(std::move(centers), std::move(weights), capacity);
}

double GreenField::value(cplx z) const {
  return has_preimage_ ? green_E(p_, omega_, z) : green_L(centers_, weights_, capacity_, z);
}

cplx GreenField::dlog(cplx z) const {
  return has_preimage_ ? dz_green_E(p_, omega_, z) : dw_green_L(centers_, weights_, z);
}

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Raw (1/2pi i) * integral of weight(z) * (2 dg) dz, no imaginary-part check.
cplx raw_integral(const GreenField& field, const ContourPath& path,
                  const std::function<cplx(cplx)>* f, std::span<const cplx> f_values) {
  const size_t n = path.segment_count();
  if (n < 2) throw DomainError("contour needs at least two segments");
  auto weight = [&](size_t k) -> cplx {
    if (f) return (*f)(path.samples[k]);
    if (!f_values.empty()) return f_values[k];
    return cplx(1.0);
  };
  cplx acc(0.0);
  if (!path.tangents.empty()) {
    // periodic trapezoidal rule with exact tangents on the uniform grid
    const double dt =
        std::isfinite(path.param_step) ? path.param_step : kTwoPi / static_cast<double>(n);
    for (size_t k = 0; k < n; ++k)
      acc += weight(k) * field.dlog(path.samples[k]) * path.tangents[k];
    return acc * dt / cplx(0.0, kTwoPi);
  }
  // chord rule over the polygon
  cplx prev = weight(0) * field.dlog(path.samples[0]);
  for (size_t k = 0; k < n; ++k) {
    const cplx next = weight(k + 1) * field.dlog(path.samples[k + 1]);
    acc += 0.5 * (prev + next) * (path.samples[k + 1] - path.samples[k]);
    prev = next;
  }
  return acc / cplx(0.0, kTwoPi);
}

double as_period(cplx value) {
  if (std::abs(value.imag()) > 1e-8)
    throw AccuracyError("contour period has a non-real part; refine the sampling");
  return value.real();
}

}  // namespace

double contour_period(const GreenField& field, const ContourPath& path) {
  return as_period(raw_integral(field, path, nullptr, {}));
}

cplx contour_moment(const GreenField& field, const ContourPath& path,
                    const std::function<cplx(cplx)>& f) {
  return raw_integral(field, path, &f, {});
}

cplx contour_moment(const GreenField& field, const ContourPath& path,
                    std::span<const cplx> f_values) {
  if (f_values.size() != path.samples.size())
    throw DomainError("sampled integrand does not match the contour sampling");
  return raw_integral(field, path, nullptr, f_values);
}

namespace {

// On a uniform parameter grid the trapezoidal rule converges geometrically
// for smooth closed tours. Three nested grids measure the actual ratio; when
// the decay is clearly geometric the finest value is accepted outright.
bool spectral_pass(const GreenField& field, const ContourPath& path,
                   const std::function<cplx(cplx)>* f, double tol, cplx& out) {
  if (path.tangents.empty() || !std::isfinite(path.param_step)) return false;
  const size_t n = path.segment_count();
  if (n < 16 || n % 4 != 0) return false;
  const auto sub = [&](size_t stride) {
    ContourPath s;
    s.level = path.level;
    s.param_start = path.param_start;
    s.param_step = path.param_step * static_cast<double>(stride);
    for (size_t k = 0; k <= n; k += stride) {
      s.samples.push_back(path.samples[k]);
      s.tangents.push_back(path.tangents[k]);
    }
    return s;
  };
  const cplx coarse = raw_integral(field, sub(4), f, {});
  const cplx mid = raw_integral(field, sub(2), f, {});
  const cplx full = raw_integral(field, path, f, {});
  const double d_coarse = std::abs(coarse - mid);
  const double d_fine = std::abs(mid - full);
  if (d_fine > 1e-300) {
    const double ratio = d_fine / std::max(d_coarse, 1e-300);
    if (ratio > 0.25) return false;
    if (d_fine * ratio > 0.1 * tol) return false;
  }
  out = full;
  return true;
}

cplx refined_loop(const GreenField& field, const ContourPath& path,
                  const std::function<cplx(cplx)>* f, double tol) {
  cplx fast(0.0);
  if (spectral_pass(field, path, f, tol, fast) &&
      (f != nullptr || std::abs(fast.imag()) < 1e-8))
    return fast;

  ContourPath cur = path;
  cplx prev = raw_integral(field, cur, f, {});
  for (int level = 0; level < 20; ++level) {
    cur = refine_midpoints(cur);
    const cplx next = raw_integral(field, cur, f, {});
    // periods must come out real; moments are genuinely complex
    if (std::abs(next - prev) < tol && (f != nullptr || std::abs(next.imag()) < 1e-8))
      return next;
    prev = next;
    if (cur.samples.size() > 3'000'000) break;
  }
  throw AccuracyError("contour integral did not converge under sample doubling");
}

}  // namespace

double period_refined(const GreenField& field, const ContourPath& path) {
  return as_period(refined_loop(field, path, nullptr, 1e-9));
}

cplx moment_refined(const GreenField& field, const ContourPath& path,
                    const std::function<cplx(cplx)>& f, double tol) {
  return refined_loop(field, path, &f, tol);
}

}  // namespace walsh
