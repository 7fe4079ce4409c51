#pragma once

// Truncated Taylor ("jet") arithmetic in one and two variables, dense
// coefficient storage.  All binary operations truncate to the smaller of the
// two operand orders; nothing here ever extrapolates accuracy it does not
// have.  Orders are small (default 6), so the quadratic/quartic convolution
// loops below are not worth optimizing.

#include <array>
#include <vector>

#include "cuspedge/errors.hpp"

namespace cuspedge {

inline constexpr int kDefaultOrder = 6;

// ---------------------------------------------------------------------------
// Univariate jets: f(t) = sum c[k] t^k, k = 0..order.

struct Jet1 {
  std::vector<double> c{0.0};  // size == order() + 1

  Jet1() = default;
  explicit Jet1(int order) : c(order + 1, 0.0) {}

  int order() const { return static_cast<int>(c.size()) - 1; }

  // Coefficient of t^k; reads past the order are 0 by convention.
  double get(int k) const {
    return (k >= 0 && k < static_cast<int>(c.size())) ? c[k] : 0.0;
  }
  void set(int k, double v);

  static Jet1 constant(double v, int order = kDefaultOrder);
  static Jet1 variable(int order = kDefaultOrder);  // the jet of t itself
};

Jet1 truncated(const Jet1& a, int order);

Jet1 operator+(const Jet1& a, const Jet1& b);
Jet1 operator-(const Jet1& a, const Jet1& b);
Jet1 operator-(const Jet1& a);
Jet1 operator*(const Jet1& a, const Jet1& b);
Jet1 operator*(double s, const Jet1& a);
Jet1 operator*(const Jet1& a, double s);
Jet1 operator+(const Jet1& a, double s);
Jet1 operator+(double s, const Jet1& a);
Jet1 operator-(const Jet1& a, double s);
Jet1 operator-(double s, const Jet1& a);

// outer(inner(t)); requires inner(0) == 0 (up to kTauZero).
Jet1 jet_compose(const Jet1& outer, const Jet1& inner);

// a / t^k.  Throws NotDivisible unless c[0..k-1] all vanish (|.| <= tol).
// The result is only known to order a.order() - k, and says so.
Jet1 jet_div_exact(const Jet1& a, int k, double tol = kTauZero);

// g with g*g*a == 1; requires a(0) > 0.
Jet1 jet_sqrt_inv(const Jet1& a);
Jet1 jet_sqrt(const Jet1& a);
// 1/a; requires a(0) != 0.
Jet1 jet_inv(const Jet1& a);

Jet1 jet_derivative(const Jet1& a);          // order drops by one
Jet1 jet_antiderivative(const Jet1& a);      // constant term 0, order + 1

double jet_eval(const Jet1& a, double t);    // Horner

// psi with phi(psi(t)) = t + O(t^{order+1}); requires phi(0)=0, phi'(0)!=0.
Jet1 jet_invert(const Jet1& phi);

// max |a_k - b_k| over the common order.
double jet_dist(const Jet1& a, const Jet1& b);

// ---------------------------------------------------------------------------
// Bivariate jets: f(u,v) = sum c[i,j] u^i v^j, i + j <= order.
// Rectangular storage (order+1)^2; entries with i + j > order stay zero.

struct Jet2 {
  int n = 0;                   // order
  std::vector<double> c{0.0};  // row-major, c[i*(n+1)+j] multiplies u^i v^j

  Jet2() = default;
  explicit Jet2(int order) : n(order), c((order + 1) * (order + 1), 0.0) {}

  int order() const { return n; }
  double get(int i, int j) const {
    return (i >= 0 && j >= 0 && i <= n && j <= n && i + j <= n)
               ? c[i * (n + 1) + j]
               : 0.0;
  }
  void set(int i, int j, double v);

  static Jet2 constant(double v, int order = kDefaultOrder);
  static Jet2 variable_u(int order = kDefaultOrder);
  static Jet2 variable_v(int order = kDefaultOrder);
};

Jet2 truncated(const Jet2& a, int order);

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator*(double s, const Jet2& a);
Jet2 operator*(const Jet2& a, double s);
Jet2 operator+(const Jet2& a, double s);
Jet2 operator+(double s, const Jet2& a);
Jet2 operator-(const Jet2& a, double s);
Jet2 operator-(double s, const Jet2& a);

Jet2 jet_du(const Jet2& a);  // d/du, order drops by one
Jet2 jet_dv(const Jet2& a);  // d/dv

// a / u^k resp. a / v^k, with the same divisibility contract as jet_div_exact.
Jet2 jet_div_exact_u(const Jet2& a, int k, double tol = kTauZero);
Jet2 jet_div_exact_v(const Jet2& a, int k, double tol = kTauZero);

Jet2 jet_sqrt_inv(const Jet2& a);  // requires a(0,0) > 0
Jet2 jet_inv(const Jet2& a);       // requires a(0,0) != 0

double jet_eval(const Jet2& a, double u, double v);

Jet1 restrict_v0(const Jet2& a);   // f(u, 0) as a jet in u
Jet1 restrict_u0(const Jet2& a);   // f(0, v) as a jet in v

// outer(X(u,v), Y(u,v)); X, Y must have zero constant term.
Jet2 jet_subst(const Jet2& outer, const Jet2& X, const Jet2& Y);
// outer(x(t), y(t)) as a jet in t; x, y must have zero constant term.
Jet1 jet_subst_curve(const Jet2& outer, const Jet1& x, const Jet1& y);

double jet_dist(const Jet2& a, const Jet2& b);

// ---------------------------------------------------------------------------
// Plane jet maps (u,v) -> (x(u,v), y(u,v)) with x(0,0) = y(0,0) = 0.

struct Jet2Map {
  Jet2 x, y;

  static Jet2Map identity(int order = kDefaultOrder);
};

Jet2Map map_compose(const Jet2Map& outer, const Jet2Map& inner);  // outer o inner
// Inverse as a formal map; requires an invertible linear part.
Jet2Map map_inverse(const Jet2Map& m);

// ---------------------------------------------------------------------------
// Small helpers for jet-valued 3-vectors (shared by curves and surfaces).

template <class J>
using JVec3 = std::array<J, 3>;

using Jet1Vec3 = JVec3<Jet1>;
using Jet2Vec3 = JVec3<Jet2>;

template <class J>
J jdot(const JVec3<J>& a, const JVec3<J>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <class J>
JVec3<J> jcross(const JVec3<J>& a, const JVec3<J>& b) {
  return {a[1] * b[2] - a[2] * b[1],
          a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

template <class J>
JVec3<J> jscale(const J& s, const JVec3<J>& a) {
  return {s * a[0], s * a[1], s * a[2]};
}

template <class J>
JVec3<J> jadd(const JVec3<J>& a, const JVec3<J>& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

template <class J>
JVec3<J> jsub(const JVec3<J>& a, const JVec3<J>& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

}  // namespace cuspedge
