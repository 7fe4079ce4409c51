#include "cuspedge/jets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace cuspedge {

namespace {

int min_order(const Jet1& a, const Jet1& b) {
  return std::min(a.order(), b.order());
}

int min_order(const Jet2& a, const Jet2& b) {
  return std::min(a.order(), b.order());
}

}  // namespace

// ---------------------------------------------------------------------------
// Jet1

void Jet1::set(int k, double v) {
  if (k < 0 || k >= static_cast<int>(c.size()))
    throw Error("Jet1::set: index out of range");
  c[k] = v;
}

Jet1 Jet1::constant(double v, int order) {
  Jet1 r(order);
  r.c[0] = v;
  return r;
}

Jet1 Jet1::variable(int order) {
  if (order < 1) throw Error("Jet1::variable: order must be >= 1");
  Jet1 r(order);
  r.c[1] = 1.0;
  return r;
}

Jet1 truncated(const Jet1& a, int order) {
  if (order < 0) throw Error("truncated: negative order");
  Jet1 r(order);
  for (int k = 0; k <= std::min(order, a.order()); ++k) r.c[k] = a.c[k];
  return r;
}

Jet1 operator+(const Jet1& a, const Jet1& b) {
  Jet1 r(min_order(a, b));
  for (int k = 0; k <= r.order(); ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}

Jet1 operator-(const Jet1& a, const Jet1& b) {
  Jet1 r(min_order(a, b));
  for (int k = 0; k <= r.order(); ++k) r.c[k] = a.c[k] - b.c[k];
  return r;
}

Jet1 operator-(const Jet1& a) {
  Jet1 r = a;
  for (double& x : r.c) x = -x;
  return r;
}

Jet1 operator*(const Jet1& a, const Jet1& b) {
  Jet1 r(min_order(a, b));
  for (int k = 0; k <= r.order(); ++k) {
    double s = 0.0;
    for (int i = 0; i <= k; ++i) s += a.c[i] * b.c[k - i];
    r.c[k] = s;
  }
  return r;
}

Jet1 operator*(double s, const Jet1& a) {
  Jet1 r = a;
  for (double& x : r.c) x *= s;
  return r;
}

Jet1 operator*(const Jet1& a, double s) { return s * a; }

Jet1 operator+(const Jet1& a, double s) {
  Jet1 r = a;
  r.c[0] += s;
  return r;
}
Jet1 operator+(double s, const Jet1& a) { return a + s; }
Jet1 operator-(const Jet1& a, double s) { return a + (-s); }
Jet1 operator-(double s, const Jet1& a) { return (-a) + s; }

Jet1 jet_compose(const Jet1& outer, const Jet1& inner) {
  if (std::abs(inner.c[0]) > kTauZero)
    throw HypothesisFailed("jet_compose: inner jet must vanish at 0");
  const int ord = min_order(outer, inner);
  Jet1 in = truncated(inner, ord);
  in.c[0] = 0.0;
  // Horner in the jet ring.
  Jet1 r = Jet1::constant(outer.get(ord), ord);
  for (int k = ord - 1; k >= 0; --k) r = r * in + outer.get(k);
  return r;
}

Jet1 jet_div_exact(const Jet1& a, int k, double tol) {
  if (k < 0) throw Error("jet_div_exact: negative power");
  if (k > a.order())
    throw NotDivisible("jet_div_exact: power exceeds jet order");
  for (int i = 0; i < k; ++i)
    if (std::abs(a.c[i]) > tol)
      throw NotDivisible("jet_div_exact: low-order coefficient is not zero");
  Jet1 r(a.order() - k);
  for (int i = 0; i <= r.order(); ++i) r.c[i] = a.c[i + k];
  return r;
}

Jet1 jet_sqrt_inv(const Jet1& a) {
  if (!(a.c[0] > kTauZero))
    throw HypothesisFailed("jet_sqrt_inv: constant term must be positive");
  // Newton for g = a^{-1/2}: g <- g (3 - a g^2) / 2, quadratic convergence
  // in valuation, so a handful of sweeps covers any practical order.
  Jet1 g = Jet1::constant(1.0 / std::sqrt(a.c[0]), a.order());
  int sweeps = 1;
  while ((1 << sweeps) < a.order() + 1) ++sweeps;
  for (int i = 0; i <= sweeps; ++i) g = 0.5 * (g * (3.0 - a * (g * g)));
  return g;
}

Jet1 jet_sqrt(const Jet1& a) { return a * jet_sqrt_inv(a); }

Jet1 jet_inv(const Jet1& a) {
  if (std::abs(a.c[0]) <= kTauZero)
    throw HypothesisFailed("jet_inv: constant term must be nonzero");
  Jet1 r(a.order());
  r.c[0] = 1.0 / a.c[0];
  for (int k = 1; k <= a.order(); ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += a.c[i] * r.c[k - i];
    r.c[k] = -s / a.c[0];
  }
  return r;
}

Jet1 jet_derivative(const Jet1& a) {
  if (a.order() == 0) return Jet1(0);
  Jet1 r(a.order() - 1);
  for (int k = 0; k <= r.order(); ++k) r.c[k] = (k + 1) * a.c[k + 1];
  return r;
}

Jet1 jet_antiderivative(const Jet1& a) {
  Jet1 r(a.order() + 1);
  for (int k = 0; k <= a.order(); ++k) r.c[k + 1] = a.c[k] / (k + 1);
  return r;
}

double jet_eval(const Jet1& a, double t) {
  double r = 0.0;
  for (int k = a.order(); k >= 0; --k) r = r * t + a.c[k];
  return r;
}

Jet1 jet_invert(const Jet1& phi) {
  if (std::abs(phi.c[0]) > kTauZero)
    throw HypothesisFailed("jet_invert: map must fix 0");
  if (std::abs(phi.get(1)) <= kTauZero)
    throw HypothesisFailed("jet_invert: derivative at 0 must be nonzero");
  const int ord = phi.order();
  const Jet1 t = Jet1::variable(ord);
  Jet1 psi = (1.0 / phi.get(1)) * t;
  // Newton: psi <- psi - (phi(psi) - t) / phi'(psi).  Each step doubles the
  // number of correct coefficients.
  const Jet1 dphi = truncated(jet_derivative(phi), ord);
  int sweeps = 1;
  while ((1 << sweeps) < ord + 1) ++sweeps;
  for (int i = 0; i <= sweeps; ++i) {
    Jet1 err = jet_compose(phi, psi) - t;
    psi = psi - err * jet_inv(jet_compose(dphi, psi));
  }
  return psi;
}

double jet_dist(const Jet1& a, const Jet1& b) {
  double m = 0.0;
  for (int k = 0; k <= std::min(a.order(), b.order()); ++k)
    m = std::max(m, std::abs(a.c[k] - b.c[k]));
  return m;
}

// ---------------------------------------------------------------------------
// Jet2

void Jet2::set(int i, int j, double v) {
  if (i < 0 || j < 0 || i + j > n) throw Error("Jet2::set: index out of range");
  c[i * (n + 1) + j] = v;
}

Jet2 Jet2::constant(double v, int order) {
  Jet2 r(order);
  r.c[0] = v;
  return r;
}

Jet2 Jet2::variable_u(int order) {
  if (order < 1) throw Error("Jet2::variable_u: order must be >= 1");
  Jet2 r(order);
  r.set(1, 0, 1.0);
  return r;
}

Jet2 Jet2::variable_v(int order) {
  if (order < 1) throw Error("Jet2::variable_v: order must be >= 1");
  Jet2 r(order);
  r.set(0, 1, 1.0);
  return r;
}

Jet2 truncated(const Jet2& a, int order) {
  if (order < 0) throw Error("truncated: negative order");
  Jet2 r(order);
  for (int i = 0; i <= order; ++i)
    for (int j = 0; i + j <= order; ++j) r.set(i, j, a.get(i, j));
  return r;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
  Jet2 r(min_order(a, b));
  for (int i = 0; i <= r.n; ++i)
    for (int j = 0; i + j <= r.n; ++j) r.set(i, j, a.get(i, j) + b.get(i, j));
  return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
  Jet2 r(min_order(a, b));
  for (int i = 0; i <= r.n; ++i)
    for (int j = 0; i + j <= r.n; ++j) r.set(i, j, a.get(i, j) - b.get(i, j));
  return r;
}

Jet2 operator-(const Jet2& a) {
  Jet2 r = a;
  for (double& x : r.c) x = -x;
  return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Jet2 r(min_order(a, b));
  for (int i1 = 0; i1 <= std::min(a.n, r.n); ++i1)
    for (int j1 = 0; i1 + j1 <= std::min(a.n, r.n); ++j1) {
      const double ac = a.get(i1, j1);
      if (ac == 0.0) continue;
      for (int i2 = 0; i1 + j1 + i2 <= r.n; ++i2)
        for (int j2 = 0; i1 + j1 + i2 + j2 <= r.n; ++j2) {
          const double bc = b.get(i2, j2);
          if (bc == 0.0) continue;
          r.c[(i1 + i2) * (r.n + 1) + (j1 + j2)] += ac * bc;
        }
    }
  return r;
}

Jet2 operator*(double s, const Jet2& a) {
  Jet2 r = a;
  for (double& x : r.c) x *= s;
  return r;
}

Jet2 operator*(const Jet2& a, double s) { return s * a; }

Jet2 operator+(const Jet2& a, double s) {
  Jet2 r = a;
  r.c[0] += s;
  return r;
}
Jet2 operator+(double s, const Jet2& a) { return a + s; }
Jet2 operator-(const Jet2& a, double s) { return a + (-s); }
Jet2 operator-(double s, const Jet2& a) { return (-a) + s; }

Jet2 jet_du(const Jet2& a) {
  if (a.n == 0) return Jet2(0);
  Jet2 r(a.n - 1);
  for (int i = 0; i <= r.n; ++i)
    for (int j = 0; i + j <= r.n; ++j) r.set(i, j, (i + 1) * a.get(i + 1, j));
  return r;
}

Jet2 jet_dv(const Jet2& a) {
  if (a.n == 0) return Jet2(0);
  Jet2 r(a.n - 1);
  for (int i = 0; i <= r.n; ++i)
    for (int j = 0; i + j <= r.n; ++j) r.set(i, j, (j + 1) * a.get(i, j + 1));
  return r;
}

Jet2 jet_div_exact_u(const Jet2& a, int k, double tol) {
  if (k < 0) throw Error("jet_div_exact_u: negative power");
  if (k > a.n) throw NotDivisible("jet_div_exact_u: power exceeds jet order");
  for (int i = 0; i < k; ++i)
    for (int j = 0; i + j <= a.n; ++j)
      if (std::abs(a.get(i, j)) > tol)
        throw NotDivisible("jet_div_exact_u: jet is not divisible by u^k");
  Jet2 r(a.n - k);
  for (int i = 0; i <= r.n; ++i)
    for (int j = 0; i + j <= r.n; ++j) r.set(i, j, a.get(i + k, j));
  return r;
}

Jet2 jet_div_exact_v(const Jet2& a, int k, double tol) {
  if (k < 0) throw Error("jet_div_exact_v: negative power");
  if (k > a.n) throw NotDivisible("jet_div_exact_v: power exceeds jet order");
  for (int j = 0; j < k; ++j)
    for (int i = 0; i + j <= a.n; ++i)
      if (std::abs(a.get(i, j)) > tol)
        throw NotDivisible("jet_div_exact_v: jet is not divisible by v^k");
  Jet2 r(a.n - k);
  for (int i = 0; i <= r.n; ++i)
    for (int j = 0; i + j <= r.n; ++j) r.set(i, j, a.get(i, j + k));
  return r;
}

Jet2 jet_sqrt_inv(const Jet2& a) {
  if (!(a.c[0] > kTauZero))
    throw HypothesisFailed("jet_sqrt_inv: constant term must be positive");
  Jet2 g = Jet2::constant(1.0 / std::sqrt(a.c[0]), a.n);
  int sweeps = 1;
  while ((1 << sweeps) < a.n + 1) ++sweeps;
  for (int i = 0; i <= sweeps; ++i) g = 0.5 * (g * (3.0 - a * (g * g)));
  return g;
}

Jet2 jet_inv(const Jet2& a) {
  if (std::abs(a.c[0]) <= kTauZero)
    throw HypothesisFailed("jet_inv: constant term must be nonzero");
  // Newton: r <- r (2 - a r).
  Jet2 r = Jet2::constant(1.0 / a.c[0], a.n);
  int sweeps = 1;
  while ((1 << sweeps) < a.n + 1) ++sweeps;
  for (int i = 0; i <= sweeps; ++i) r = r * (2.0 - a * r);
  return r;
}

double jet_eval(const Jet2& a, double u, double v) {
  // Horner in u of Horner-in-v rows.
  double r = 0.0;
  for (int i = a.n; i >= 0; --i) {
    double row = 0.0;
    for (int j = a.n - i; j >= 0; --j) row = row * v + a.get(i, j);
    r = r * u + row;
  }
  return r;
}

Jet1 restrict_v0(const Jet2& a) {
  Jet1 r(a.n);
  for (int i = 0; i <= a.n; ++i) r.c[i] = a.get(i, 0);
  return r;
}

Jet1 restrict_u0(const Jet2& a) {
  Jet1 r(a.n);
  for (int j = 0; j <= a.n; ++j) r.c[j] = a.get(0, j);
  return r;
}

Jet2 jet_subst(const Jet2& outer, const Jet2& X, const Jet2& Y) {
  if (std::abs(X.c[0]) > kTauZero || std::abs(Y.c[0]) > kTauZero)
    throw HypothesisFailed("jet_subst: substituted jets must vanish at 0");
  const int ord = std::min(outer.order(), min_order(X, Y));
  Jet2 x = truncated(X, ord), y = truncated(Y, ord);
  x.c[0] = y.c[0] = 0.0;
  // Power tables: both substituted jets have valuation >= 1, so powers past
  // `ord` vanish identically.
  std::vector<Jet2> xp(ord + 1), yp(ord + 1);
  xp[0] = Jet2::constant(1.0, ord);
  yp[0] = xp[0];
  for (int k = 1; k <= ord; ++k) {
    xp[k] = xp[k - 1] * x;
    yp[k] = yp[k - 1] * y;
  }
  Jet2 r(ord);
  for (int i = 0; i <= ord; ++i)
    for (int j = 0; i + j <= ord; ++j) {
      const double coef = outer.get(i, j);
      if (coef == 0.0) continue;
      r = r + coef * (xp[i] * yp[j]);
    }
  return r;
}

Jet1 jet_subst_curve(const Jet2& outer, const Jet1& x, const Jet1& y) {
  if (std::abs(x.c[0]) > kTauZero || std::abs(y.c[0]) > kTauZero)
    throw HypothesisFailed("jet_subst_curve: curve must start at the origin");
  const int ord = std::min(outer.order(), std::min(x.order(), y.order()));
  Jet1 xx = truncated(x, ord), yy = truncated(y, ord);
  xx.c[0] = yy.c[0] = 0.0;
  std::vector<Jet1> xp(ord + 1), yp(ord + 1);
  xp[0] = Jet1::constant(1.0, ord);
  yp[0] = xp[0];
  for (int k = 1; k <= ord; ++k) {
    xp[k] = xp[k - 1] * xx;
    yp[k] = yp[k - 1] * yy;
  }
  Jet1 r(ord);
  for (int i = 0; i <= ord; ++i)
    for (int j = 0; i + j <= ord; ++j) {
      const double coef = outer.get(i, j);
      if (coef == 0.0) continue;
      r = r + coef * (xp[i] * yp[j]);
    }
  return r;
}

double jet_dist(const Jet2& a, const Jet2& b) {
  double m = 0.0;
  const int ord = min_order(a, b);
  for (int i = 0; i <= ord; ++i)
    for (int j = 0; i + j <= ord; ++j)
      m = std::max(m, std::abs(a.get(i, j) - b.get(i, j)));
  return m;
}

// ---------------------------------------------------------------------------
// Jet2Map

Jet2Map Jet2Map::identity(int order) {
  return {Jet2::variable_u(order), Jet2::variable_v(order)};
}

Jet2Map map_compose(const Jet2Map& outer, const Jet2Map& inner) {
  return {jet_subst(outer.x, inner.x, inner.y),
          jet_subst(outer.y, inner.x, inner.y)};
}

Jet2Map map_inverse(const Jet2Map& m) {
  const double a = m.x.get(1, 0), b = m.x.get(0, 1);
  const double c = m.y.get(1, 0), d = m.y.get(0, 1);
  const double det = a * d - b * c;
  if (std::abs(det) <= kTauZero)
    throw HypothesisFailed("map_inverse: linear part is singular");
  const int ord = std::min(m.x.order(), m.y.order());
  // Seed with the inverse of the linear part, then correct degree by degree:
  // composing with the true map leaves an error of strictly increasing
  // valuation, and pulling it back through the inverse linear part kills the
  // lowest surviving degree each sweep.
  const Jet2 U = Jet2::variable_u(ord), V = Jet2::variable_v(ord);
  Jet2Map inv{(d * U - b * V) * (1.0 / det), (-c * U + a * V) * (1.0 / det)};
  for (int sweep = 0; sweep < ord; ++sweep) {
    Jet2Map err{jet_subst(m.x, inv.x, inv.y) - U,
                jet_subst(m.y, inv.x, inv.y) - V};
    if (std::max(jet_dist(err.x, Jet2(ord)), jet_dist(err.y, Jet2(ord))) == 0.0)
      break;
    inv.x = inv.x - (d * err.x - b * err.y) * (1.0 / det);
    inv.y = inv.y - (-c * err.x + a * err.y) * (1.0 / det);
  }
  return inv;
}

}  // namespace cuspedge
