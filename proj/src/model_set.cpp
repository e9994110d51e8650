#include "walsh/model_set.hpp"

#include <cmath>

#include "walsh/errors.hpp"

namespace walsh {

cplx inverse_joukowski(cplx z) {
  const cplx s = std::sqrt(z - 1.0) * std::sqrt(z + 1.0);
  cplx w = z + s;
  // The two candidates multiply to 1; keep the exterior one. The principal
  // product already is, this only guards roundoff next to the segment.
  if (std::norm(w) < 1.0) w = z - s;
  return w;
}

ModelSet ModelSet::ellipse(double R) {
  if (!(R > 1.0)) throw DomainError("ellipse parameter must satisfy R > 1");
  return ModelSet(Kind::ellipse, R);
}

cplx ModelSet::riemann_map(cplx z) const {
  if (contains(z)) throw DomainError("point not in exterior of the model set");
  switch (kind_) {
    case Kind::disk:
      return z;
    case Kind::segment:
      return inverse_joukowski(z);
    case Kind::ellipse:
      return inverse_joukowski(z) / R_;
  }
  return z;
}

cplx ModelSet::riemann_map_deriv(cplx z) const {
  if (contains(z)) throw DomainError("point not in exterior of the model set");
  switch (kind_) {
    case Kind::disk:
      return cplx(1.0);
    case Kind::segment: {
      const cplx u = inverse_joukowski(z);
      return u / (u - z);  // psi' = psi / sqrt(z^2-1), and sqrt(z^2-1) = psi - z
    }
    case Kind::ellipse: {
      const cplx u = inverse_joukowski(z);
      return u / (u - z) / R_;
    }
  }
  return cplx(1.0);
}

LaurentData ModelSet::laurent() const {
  switch (kind_) {
    case Kind::disk:
      return {1.0, 0.0, 1.0};
    case Kind::segment:
      return {2.0, 0.0, 0.5};
    case Kind::ellipse:
      return {2.0 / R_, 0.0, R_ / 2.0};
  }
  return {1.0, 0.0, 1.0};
}

bool ModelSet::contains(cplx w, double tol) const {
  switch (kind_) {
    case Kind::disk:
      return std::abs(w) <= 1.0 + tol;
    case Kind::segment:
      return std::abs(w.imag()) <= tol && std::abs(w.real()) <= 1.0 + tol;
    case Kind::ellipse:
      // |inverse_joukowski| extends continuously by 1 on [-1,1], so this
      // covers the whole filled ellipse.
      return std::abs(inverse_joukowski(w)) <= R_ + tol;
  }
  return false;
}

bool ModelSet::contains(cplx w) const { return contains(w, 1e-12 * (1.0 + std::abs(w))); }

double ModelSet::green(cplx z) const { return std::log(std::abs(riemann_map(z))); }

double ModelSet::boundary_gap(cplx w) const {
  switch (kind_) {
    case Kind::disk:
      return std::abs(std::abs(w) - 1.0);
    case Kind::segment: {
      const double x = std::min(1.0, std::max(-1.0, w.real()));
      return std::abs(w - cplx(x, 0.0));
    }
    case Kind::ellipse:
      return std::abs(std::abs(inverse_joukowski(w)) - R_);
  }
  return 0.0;
}

}  // namespace walsh
