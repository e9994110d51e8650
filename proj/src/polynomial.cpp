#include "walsh/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "walsh/errors.hpp"

namespace walsh {

Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  while (c_.size() > 1 && c_.back() == cplx(0.0)) c_.pop_back();
  if (c_.empty()) c_.push_back(cplx(0.0));
}

Polynomial Polynomial::from_roots(cplx leading, std::span<const cplx> rts) {
  // Ascending coefficients; multiplying by (z - r) maps c_k to c_{k-1} - r c_k.
  std::vector<cplx> c{leading};
  for (cplx r : rts) {
    c.push_back(cplx(0.0));
    for (int k = static_cast<int>(c.size()) - 1; k > 0; --k)
      c[static_cast<size_t>(k)] = c[static_cast<size_t>(k - 1)] - r * c[static_cast<size_t>(k)];
    c[0] *= -r;
  }
  return Polynomial(std::move(c));
}

cplx Polynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return cplx(0.0);
  return c_[static_cast<size_t>(k)];
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc = c_.back();
  for (int k = degree() - 1; k >= 0; --k) acc = acc * z + c_[static_cast<size_t>(k)];
  return acc;
}

cplx Polynomial::deriv(cplx z) const {
  cplx p = c_.back(), dp = cplx(0.0);
  for (int k = degree() - 1; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + c_[static_cast<size_t>(k)];
  }
  return dp;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) throw DomainError("constant has no derivative of interest");
  std::vector<cplx> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  std::vector<cplx> out(c_.size() + rhs.c_.size() - 1, cplx(0.0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < rhs.c_.size(); ++j) out[i + j] += c_[i] * rhs.c_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<cplx> out(std::max(c_.size(), rhs.c_.size()), cplx(0.0));
  for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
  for (size_t i = 0; i < rhs.c_.size(); ++i) out[i] += rhs.c_[i];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(cplx constant) const {
  std::vector<cplx> out = c_;
  out[0] -= constant;
  return Polynomial(std::move(out));
}

double Polynomial::coeff_norm() const {
  double m = 0.0;
  for (cplx c : c_) m = std::max(m, std::abs(c));
  return m;
}

namespace {

// One simultaneous-iteration sweep; returns the largest relative step taken.
double aberth_sweep(const Polynomial& p, const Polynomial& dp, std::vector<cplx>& z) {
  const int n = static_cast<int>(z.size());
  double worst = 0.0;
  for (int k = 0; k < n; ++k) {
    cplx pk = p(z[k]);
    if (pk == cplx(0.0)) continue;
    cplx dk = dp(z[k]);
    // Nudge off an exact critical point so the Newton correction exists.
    if (dk == cplx(0.0)) {
      z[k] += cplx(1e-10, 1e-10) * (1.0 + std::abs(z[k]));
      pk = p(z[k]);
      dk = dp(z[k]);
      if (dk == cplx(0.0)) continue;
    }
    const cplx newton = pk / dk;
    cplx repulsion = cplx(0.0);
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      const cplx diff = z[k] - z[j];
      if (diff == cplx(0.0)) continue;
      repulsion += 1.0 / diff;
    }
    const cplx denom = cplx(1.0) - newton * repulsion;
    const cplx step = (std::abs(denom) < 1e-300) ? newton : newton / denom;
    z[k] -= step;
    worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[k])));
  }
  return worst;
}

double residual_bound(const Polynomial& p, cplx root, double tol) {
  return tol * (1.0 + p.coeff_norm() * std::pow(1.0 + std::abs(root), p.degree()));
}

// Groups points whose pairwise distance (transitively) stays below radius.
// Each group lists member indices; order of output follows group leaders.
std::vector<std::vector<size_t>> cluster_groups(const std::vector<cplx>& pts, double radius) {
  const size_t n = pts.size();
  std::vector<size_t> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) < radius) parent[find(i)] = find(j);

  std::vector<std::vector<size_t>> out;
  std::vector<int> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[static_cast<size_t>(slot[r])].push_back(i);
  }
  return out;
}

std::vector<std::pair<cplx, int>> cluster_points(const std::vector<cplx>& pts, double radius) {
  std::vector<std::pair<cplx, int>> out;
  for (const auto& group : cluster_groups(pts, radius)) {
    cplx mean(0.0);
    for (size_t i : group) mean += pts[i];
    mean /= static_cast<double>(group.size());
    out.push_back({mean, static_cast<int>(group.size())});
  }
  return out;
}

}  // namespace

std::vector<cplx> roots(const Polynomial& p, double tol, std::span<const cplx> init) {
  const int n = p.degree();
  if (n == 0) return {};
  if (p.leading() == cplx(0.0)) throw DomainError("zero polynomial has no root set");
  if (n == 1) return {-p.coeff(0) / p.coeff(1)};

  std::vector<cplx> z;
  if (!init.empty()) {
    z.assign(init.begin(), init.end());
    if (static_cast<int>(z.size()) != n)
      throw DomainError("warm start size does not match degree");
  } else {
    // Start circle: Cauchy bound radius, rotated by a fixed irrational offset
    // so symmetric configurations do not start on their own symmetry axes.
    double bound = 0.0;
    for (int k = 0; k < n; ++k)
      bound = std::max(bound, std::abs(p.coeff(k) / p.leading()));
    const double r0 = 1.0 + bound;
    const double offset = 6.283185307179586 * 0.41421356237309515;
    z.resize(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double th = 6.283185307179586 * k / n + offset;
      z[static_cast<size_t>(k)] = r0 * cplx(std::cos(th), std::sin(th));
    }
  }

  const Polynomial dp = p.derivative();
  for (int sweep = 0; sweep < 600; ++sweep)
    if (aberth_sweep(p, dp, z) < 1e-15) break;

  double scale = 1.0;
  for (cplx r : z) scale = std::max(scale, 1.0 + std::abs(r));

  // A multiplicity-m root stalls the simultaneous iteration on an m-gon of
  // radius about eps^(1/m) (1e-2 for m == 8). Group loosely, then polish each
  // group as one multiplicity-m root: such a root is a simple zero of the
  // (m-1)-th derivative, where Newton converges quadratically. The merge is
  // kept only when p itself vanishes at the polished point to within the
  // residual bound; otherwise the group members were merely close simple
  // roots and are polished individually instead.
  auto newton = [](const Polynomial& q, cplx r, int iters) {
    for (int it = 0; it < iters; ++it) {
      const cplx der = q.deriv(r);
      if (der == cplx(0.0)) break;
      const cplx step = q(r) / der;
      r -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(r))) break;
    }
    return r;
  };

  std::vector<cplx> polished;
  polished.reserve(z.size());
  std::vector<Polynomial> derivs{p};  // derivs[k] = p^(k)
  for (const auto& group : cluster_groups(z, 0.02 * scale)) {
    const int count = static_cast<int>(group.size());
    cplx mean(0.0);
    for (size_t i : group) mean += z[i];
    mean /= static_cast<double>(count);

    bool merged = false;
    if (count >= 2) {
      while (static_cast<int>(derivs.size()) < count) derivs.push_back(derivs.back().derivative());
      const cplx r = newton(derivs[static_cast<size_t>(count - 1)], mean, 60);
      if (std::abs(r - mean) < 0.1 * scale && std::abs(p(r)) <= residual_bound(p, r, tol)) {
        for (int m = 0; m < count; ++m) polished.push_back(r);
        merged = true;
      }
    }
    if (!merged)
      // close simple roots, or a mixed group: polish each member on p itself
      for (size_t i : group) polished.push_back(newton(p, z[i], 200));
  }

  // documented clustering radius for the returned representatives
  std::vector<cplx> out;
  out.reserve(polished.size());
  for (const auto& [mean, count] : cluster_points(polished, 1e-6 * scale))
    for (int m = 0; m < count; ++m) out.push_back(mean);

  double worst_res = 0.0;
  bool ok = true;
  for (cplx r : out) {
    const double res = std::abs(p(r));
    worst_res = std::max(worst_res, res);
    if (res > residual_bound(p, r, tol)) ok = false;
  }
  if (!ok)
    throw ConvergenceError("root iteration did not meet the residual bound", out, worst_res);

  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::vector<cplx> roots(const Polynomial& p, double tol) { return roots(p, tol, {}); }

std::vector<RootCluster> clustered_roots(const Polynomial& p, double tol,
                                         double cluster_radius_factor) {
  const std::vector<cplx> flat = roots(p, tol);
  if (flat.empty()) return {};
  double scale = 1.0;
  for (cplx r : flat) scale = std::max(scale, 1.0 + std::abs(r));

  std::vector<RootCluster> out;
  for (const auto& [mean, count] : cluster_points(flat, cluster_radius_factor * scale))
    out.push_back({mean, count});
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    return a.value.real() != b.value.real() ? a.value.real() < b.value.real()
                                            : a.value.imag() < b.value.imag();
  });
  return out;
}

std::vector<RootCluster> critical_points(const Polynomial& p, double tol) {
  const Polynomial dp = p.derivative();
  if (dp.degree() == 0 && dp.coeff(0) != cplx(0.0)) return {};
  return clustered_roots(dp, tol);
}

}  // namespace walsh
