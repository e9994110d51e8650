#include "walsh/walsh_map.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include "walsh/errors.hpp"
#include "walsh/green_field.hpp"

namespace walsh {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kTwoPi = 6.283185307179586;

double size_scale(const Polynomial& p, const LemniscaticScheme& scheme) {
  // actual root locations, not the coarser coefficient bound: the scale
  // throttles continuation steps against the geometry
  double m = 0.0;
  for (const cplx& b : roots(p)) m = std::max(m, std::abs(b));
  for (const cplx& a : scheme.centers) m = std::max(m, std::abs(a));
  return 1.0 + m;
}

}  // namespace

PhiTracker::PhiTracker(Polynomial P, ModelSet omega, LemniscaticScheme scheme)
    : p_(std::move(P)),
      dp_(p_.derivative()),
      omega_(omega),
      scheme_(std::move(scheme)),
      q_(scheme_.q),
      dq_(q_.derivative()),
      scale_(size_scale(p_, scheme_)) {
  if (p_.degree() < 1) throw DomainError("map continuation requires a nonconstant polynomial");
  if (q_.degree() != p_.degree())
    throw DomainError("scheme degree does not match the polynomial degree");
  root_mean_ = -p_.coeff(p_.degree() - 1) / (static_cast<double>(p_.degree()) * p_.leading());
}

void PhiTracker::reset() { anchored_ = false; }

cplx PhiTracker::psi_of(cplx z) const {
  const cplx u = p_(z);
  if (omega_.contains(u)) throw DomainError("the map is defined on the exterior of the pre-image");
  return omega_.riemann_map(u);
}

std::optional<cplx> PhiTracker::newton_fiber(cplx target, cplx start) const {
  cplx w = start;
  for (int it = 0; it < 80; ++it) {
    const cplx d = dq_(w);
    if (std::abs(d) < 1e-300) return std::nullopt;
    const cplx step = (q_(w) - target) / d;
    w -= step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(w))) {
      if (std::abs(q_(w) - target) <= 1e-8 * (1.0 + std::abs(target))) return w;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

void PhiTracker::advance(cplx z_to, int depth) {
  // Legs longer than a fraction of the configuration size can land near a
  // different sheet of the fiber without failing any local test, so they are
  // always split. Short legs run the predictor-corrector below.
  if (std::abs(z_to - z_pos_) <= 0.03 * scale_) {
    const cplx y = psi_of(z_to);

    cplx phi_deriv(0.0);
    const cplx qd = dq_(w_pos_);
    if (std::abs(qd) > 1e-300)
      phi_deriv = omega_.riemann_map_deriv(p_(z_pos_)) * dp_(z_pos_) / qd;
    const cplx pred = w_pos_ + phi_deriv * (z_to - z_pos_);

    const auto w = newton_fiber(y, pred);
    const double moved = std::abs(pred - w_pos_);
    if (w && std::abs(*w - pred) <= 0.5 * moved + 1e-7 * scale_) {
      w_pos_ = *w;
      z_pos_ = z_to;
      return;
    }

    // Near a saddle of Q the sheets nearly collide and Newton wanders between
    // them. The full fiber still names the branch as long as the prediction
    // sits decisively inside one basin; otherwise halve the step.
    try {
      const std::vector<cplx> fiber = roots(q_ - y, 1e-12);
      double d_best = std::numeric_limits<double>::infinity();
      double d_second = std::numeric_limits<double>::infinity();
      cplx w_best(0.0);
      for (const cplx& f : fiber) {
        const double d = std::abs(f - pred);
        if (d < d_best) {
          d_second = d_best;
          d_best = d;
          w_best = f;
        } else if (d < d_second) {
          d_second = d;
        }
      }
      if (d_best <= 0.35 * d_second) {
        w_pos_ = w_best;
        z_pos_ = z_to;
        return;
      }
    } catch (const ConvergenceError&) {
    }
  }

  if (depth >= 48) throw AccuracyError("conformal-map continuation lost the fiber");

  cplx zm = 0.5 * (z_pos_ + z_to);
  // bend the leg around the pre-image when the midpoint fell inside
  for (int push = 0; push < 40; ++push) {
    bool exterior = true;
    try {
      psi_of(zm);
    } catch (const DomainError&) {
      exterior = false;
    }
    if (exterior) break;
    if (std::abs(zm - root_mean_) < 1e-9 * scale_) {
      const cplx leg = z_to - z_pos_;
      const cplx side = std::abs(leg) > 0.0 ? cplx(0.0, 1.0) * leg / std::abs(leg) : cplx(1.0);
      zm = root_mean_ + 0.2 * scale_ * side;
    } else {
      zm = root_mean_ + (zm - root_mean_) * 1.25;
    }
  }
  advance(zm, depth + 1);
  advance(z_to, depth + 1);
}

// Ascent polyline of the exterior potential from z out to the far field.
// The potential increases strictly along it, so it never re-enters the
// pre-image; reversed, it is a crossing-free approach route to z.
std::vector<cplx> PhiTracker::escape_route(cplx z) const {
  std::vector<cplx> path{z};
  const double h = 0.02 * scale_;
  const double far = 10.0 * scale_;
  cplx zc = z;
  cplx dir_prev(0.0);
  int guard = 0;
  while (std::abs(zc - root_mean_) < far) {
    if (++guard > 20000) throw AccuracyError("escape route from the pre-image stalled");
    cplx dlog(0.0);
    bool flat = true;
    const cplx v = p_(zc);
    if (!omega_.contains(v)) {
      const cplx psi = omega_.riemann_map(v);
      if (std::abs(psi) > 1e-300) {
        dlog = omega_.riemann_map_deriv(v) * dp_(zc) / psi;
        flat = std::abs(dlog) * (1.0 + std::abs(zc)) < 1e-9;
      }
    }
    cplx dir;
    if (flat) {
      // at a saddle of the potential; coast through on the previous heading
      dir = std::abs(dir_prev) > 0.0 ? dir_prev : cplx(1.0);
    } else {
      dir = std::conj(dlog) / std::abs(dlog);
      const double along = dir.real() * dir_prev.real() + dir.imag() * dir_prev.imag();
      if (std::abs(dir_prev) > 0.0 && along < -0.2) dir = dir_prev;
    }
    double hh = h;
    cplx znext = zc + hh * dir;
    for (int shrink = 0; omega_.contains(p_(znext)) && shrink < 10; ++shrink) {
      hh *= 0.5;
      znext = zc + hh * dir;
    }
    if (omega_.contains(p_(znext))) znext = zc + h * cplx(0.0, 1.0) * dir;
    zc = znext;
    dir_prev = dir;
    path.push_back(zc);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

void PhiTracker::route_to(cplx z) {
  (void)psi_of(z);  // rejects interior points before the escape walk
  const auto path = escape_route(z);
  const cplx za = path.front();
  // far out the fiber point next to za is Phi(za) itself
  const auto w = newton_fiber(psi_of(za), za);
  if (!w)
    throw ConvergenceError("far-field anchoring of the map failed", {za},
                           std::abs(q_(za) - psi_of(za)));
  z_pos_ = za;
  w_pos_ = *w;
  anchored_ = true;
  for (size_t i = 1; i < path.size(); ++i) advance(path[i], 0);
}

cplx PhiTracker::eval(cplx z) {
  if (!anchored_) {
    route_to(z);
    return w_pos_;
  }
  try {
    advance(z, 0);
  } catch (const AccuracyError&) {
    // the direct leg could not be continued; re-anchor along an ascent route
    route_to(z);
  }
  return w_pos_;
}

cplx PhiTracker::map_deriv(cplx z, cplx w) const {
  const cplx qd = dq_(w);
  if (std::abs(qd) < 1e-300) throw AccuracyError("map derivative at a saddle of the lemniscate");
  return omega_.riemann_map_deriv(p_(z)) * dp_(z) / qd;
}

cplx PhiTracker::slide_target(cplx w, cplx y0, cplx y1) const {
  if (std::abs(y1 - y0) == 0.0) return w;
  struct Slider {
    const PhiTracker& t;
    cplx walk(cplx w, cplx ya, cplx yb, int depth) const {
      const cplx d = t.dq_(w);
      const cplx pred = std::abs(d) > 1e-300 ? w + (yb - ya) / d : w;
      const auto next = t.newton_fiber(yb, pred);
      const double moved = std::abs(pred - w);
      if (next && std::abs(*next - pred) <= 0.5 * moved + 1e-9 * (1.0 + std::abs(w)))
        return *next;
      try {
        const std::vector<cplx> fiber = roots(t.q_ - yb, 1e-12);
        double d_best = std::numeric_limits<double>::infinity();
        double d_second = std::numeric_limits<double>::infinity();
        cplx w_best(0.0);
        for (const cplx& f : fiber) {
          const double dd = std::abs(f - pred);
          if (dd < d_best) {
            d_second = d_best;
            d_best = dd;
            w_best = f;
          } else if (dd < d_second) {
            d_second = dd;
          }
        }
        if (d_best <= 0.35 * d_second) return w_best;
      } catch (const ConvergenceError&) {
      }
      if (depth >= 40) throw AccuracyError("image-side continuation lost the fiber");
      const cplx ym = 0.5 * (ya + yb);
      return walk(walk(w, ya, ym, depth + 1), ym, yb, depth + 1);
    }
  };
  return Slider{*this}.walk(w, y0, y1, 0);
}

cplx phi_track(const Polynomial& P, const ModelSet& omega, const LemniscaticScheme& scheme,
               cplx z) {
  PhiTracker tracker(P, omega, scheme);
  return tracker.eval(z);
}

namespace {

// Continuation of base + X(z)^{1/n} from far away, where the fiber is exact
// and candidate matching replaces Newton: walk s from the far anchor to z,
// at each stop pick the n-th root candidate nearest the running value.
cplx walk_nth_root(const std::function<cplx(cplx)>& X, cplx base, int n, cplx z, cplx root_mean,
                   double scale) {
  cplx dir = z - root_mean;
  dir = std::abs(dir) > 1e-12 * scale ? dir / std::abs(dir) : cplx(1.0);
  const cplx za = root_mean + 10.0 * scale * dir;

  const auto candidates = [&](cplx value, std::array<cplx, 64>& out) {
    const double r = std::pow(std::abs(value), 1.0 / n);
    const double th = std::arg(value) / n;
    for (int j = 0; j < n; ++j)
      out[static_cast<size_t>(j)] = base + std::polar(r, th + kTwoPi * j / n);
  };

  std::array<cplx, 64> cand{};
  candidates(X(za), cand);
  cplx w = cand[0];
  double best = std::abs(cand[0] - za);
  for (int j = 1; j < n; ++j) {
    const double d = std::abs(cand[static_cast<size_t>(j)] - za);
    if (d < best) {
      best = d;
      w = cand[static_cast<size_t>(j)];
    }
  }

  const double sin_gap = n > 1 ? std::sin(kPi / n) : 1.0;
  double s = 0.0;
  double ds = 0.25;
  int guard = 0;
  while (s < 1.0) {
    if (++guard > 100000) throw AccuracyError("root-branch walk stalled");
    const double s_next = std::min(1.0, s + ds);
    const cplx zs = za + s_next * (z - za);
    const cplx xv = X(zs);
    candidates(xv, cand);
    cplx w_next = cand[0];
    double d_best = std::abs(cand[0] - w);
    for (int j = 1; j < n; ++j) {
      const double d = std::abs(cand[static_cast<size_t>(j)] - w);
      if (d < d_best) {
        d_best = d;
        w_next = cand[static_cast<size_t>(j)];
      }
    }
    const double separation = 2.0 * std::pow(std::abs(xv), 1.0 / n) * sin_gap;
    if (n > 1 && d_best > 0.35 * separation) {
      ds *= 0.5;
      if (ds < 1e-9) throw AccuracyError("root-branch walk lost the branch");
      continue;
    }
    w = w_next;
    s = s_next;
    if (n == 1 || d_best < 0.1 * separation) ds = std::min(0.25, ds * 1.6);
  }
  return w;
}

}  // namespace

cplx phi_closed_form(const Polynomial& P, const ModelSet& omega, const LemniscaticScheme& scheme,
                     cplx z) {
  const int n = P.degree();
  const double d1 = omega.laurent().d1;

  switch (scheme.provenance) {
    case Provenance::fixed_point: {
      if (omega.contains(P(z)))
        throw DomainError("the map is defined on the exterior of the pre-image");
      return z;
    }
    case Provenance::linear: {
      return scheme.centers[0] + omega.riemann_map(P(z)) / (d1 * P.leading());
    }
    case Provenance::connected:
    case Provenance::monomial_family: {
      if (n > 64) throw DispatchError("root-branch walk supports degree at most 64");
      const cplx lead = d1 * P.leading();
      cplx base;
      cplx shift(0.0);
      if (scheme.centers.size() == 1) {
        base = scheme.centers[0];
      } else {
        // centers form a regular n-gon around the critical point
        base = cplx(0.0);
        for (const cplx& a : scheme.centers) base += a;
        base /= static_cast<double>(scheme.centers.size());
        shift = omega.riemann_map(P(base));
      }
      const cplx rm = -P.coeff(n - 1) / (static_cast<double>(n) * P.leading());
      const auto X = [&](cplx zz) -> cplx {
        const cplx u = P(zz);
        if (omega.contains(u))
          throw DomainError("the map is defined on the exterior of the pre-image");
        return (omega.riemann_map(u) - shift) / lead;
      };
      return walk_nth_root(X, base, n, z, rm, size_scale(P, scheme));
    }
    case Provenance::two_components:
    case Provenance::general_newton:
      throw DispatchError("no elementary form for this scheme; use the tracked map");
  }
  throw DispatchError("unrecognized scheme provenance");
}

BoundaryMap phi_boundary(const Polynomial& P, const ModelSet& omega,
                         const PreimageStructure& structure, const LemniscaticScheme& scheme,
                         int component, int samples_per_turn) {
  BoundaryMap bm;
  bm.domain = trace_boundary(P, omega, structure, component, samples_per_turn);
  const auto& zs = bm.domain.samples;
  const auto& zt = bm.domain.tangents;
  const double t0 = bm.domain.param_start;
  const double dt = bm.domain.param_step;

  // fix the image of the first tour sample: probe both sides of the boundary
  // (for the segment set both are exterior and carry different prime ends)
  // and keep the side whose model-set image sits at the tour parameter
  PhiTracker tracker(P, omega, scheme);
  const cplx z0 = zs.front();
  const cplx tau = zt.front() / std::abs(zt.front());
  const double delta = 1e-5 * (1.0 + std::abs(z0));
  const cplx y_start = std::polar(1.0, t0);

  cplx w0(0.0);
  bool found = false;
  double best_err = 0.2;
  for (const double side : {+1.0, -1.0}) {
    const cplx z_probe = z0 + cplx(0.0, side) * tau * delta;
    cplx w_probe, y_probe;
    try {
      tracker.reset();
      w_probe = tracker.eval(z_probe);
      y_probe = omega.riemann_map(P(z_probe));
    } catch (const DomainError&) {
      continue;  // probe fell inside; this side is interior
    } catch (const AccuracyError&) {
      continue;
    }
    const double err = std::abs(y_probe / std::abs(y_probe) - y_start);
    if (err < best_err) {
      best_err = err;
      w0 = tracker.slide_target(w_probe, y_probe, y_start);
      found = true;
    }
  }
  if (!found) throw AccuracyError("could not attach the image tour to the boundary");

  const size_t total = zs.size() - 1;
  bm.image.orientation = +1;
  bm.image.level = 0.0;
  bm.image.param_start = t0;
  bm.image.param_step = dt;
  bm.image.samples.resize(zs.size());
  bm.image.tangents.resize(zs.size());

  const Polynomial dq = scheme.q.derivative();
  cplx w = w0;
  cplx y_prev = y_start;
  for (size_t k = 0; k < total; ++k) {
    bm.image.samples[k] = w;
    bm.image.tangents[k] = cplx(0.0, 1.0) * y_prev / dq(w);
    const cplx y_next = std::polar(1.0, t0 + dt * static_cast<double>(k + 1));
    w = tracker.slide_target(w, y_prev, y_next);
    y_prev = y_next;
  }
  if (std::abs(w - w0) > 1e-6 * (1.0 + std::abs(w0)))
    throw AccuracyError("image tour failed to close");
  bm.image.samples[total] = bm.image.samples.front();
  bm.image.tangents[total] = bm.image.tangents.front();
  return bm;
}

cplx phi_cauchy(std::span<const BoundaryMap> boundary, cplx z) {
  if (boundary.empty()) throw DomainError("no boundary tours supplied");
  cplx acc(0.0);
  for (const BoundaryMap& bm : boundary) {
    const auto& zs = bm.domain.samples;
    const auto& ws = bm.image.samples;
    const auto& zt = bm.domain.tangents;
    if (zs.size() != ws.size() || zs.size() < 3)
      throw DomainError("boundary tour and image are not aligned");
    const size_t nseg = zs.size() - 1;

    double max_gap = 0.0;
    double min_dist = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < nseg; ++k) {
      max_gap = std::max(max_gap, std::abs(zs[k + 1] - zs[k]));
      min_dist = std::min(min_dist, std::abs(zs[k] - z));
    }
    if (min_dist < 3.0 * max_gap)
      throw AccuracyError("evaluation point too close to the sampled boundary");

    if (!zt.empty() && std::isfinite(bm.domain.param_step)) {
      const double dt = bm.domain.param_step;
      cplx sum(0.0);
      for (size_t k = 0; k < nseg; ++k) sum += (ws[k] - zs[k]) / (zs[k] - z) * zt[k];
      acc += sum * dt;
    } else {
      cplx sum(0.0);
      for (size_t k = 0; k < nseg; ++k) {
        const cplx fa = (ws[k] - zs[k]) / (zs[k] - z);
        const cplx fb = (ws[k + 1] - zs[k + 1]) / (zs[k + 1] - z);
        sum += 0.5 * (fa + fb) * (zs[k + 1] - zs[k]);
      }
      acc += sum;
    }
  }
  return z - acc / cplx(0.0, kTwoPi);
}

IdentityResiduals check_identity(const Polynomial& P, const ModelSet& omega,
                                 const LemniscaticScheme& scheme, cplx z) {
  const cplx w = phi_track(P, omega, scheme, z);
  const cplx psi = omega.riemann_map(P(z));
  IdentityResiduals r;
  r.map_equation = std::abs(scheme.q(w) - psi) / (1.0 + std::abs(psi));
  const auto weights = scheme.weights();
  r.green_match = std::abs(green_E(P, omega, z) -
                           green_L(scheme.centers, weights, scheme.capacity, w));
  return r;
}

}  // namespace walsh
