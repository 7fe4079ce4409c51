#include "cuspedge/curves.hpp"

#include <algorithm>
#include <cmath>

namespace cuspedge {

CurveGerm make_curve_germ(const Jet1& a, const Jet1& b, const Jet1& c) {
  if (a.order() != b.order() || a.order() != c.order()) {
    throw HypothesisFailed("curve germ: components must share one order");
  }
  if (a.order() < 2) {
    throw HypothesisFailed("curve germ: order must be at least 2");
  }
  if (a.get(0) != 0.0 || b.get(0) != 0.0 || c.get(0) != 0.0) {
    throw HypothesisFailed("curve germ: must be based at the origin");
  }
  return CurveGerm{{a, b, c}};
}

Vec3 curve_deriv0(const CurveGerm& g, int k) {
  if (k < 0 || k > g.order()) {
    throw HypothesisFailed("curve_deriv0: derivative order out of range");
  }
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return Vec3(g.x[0].get(k), g.x[1].get(k), g.x[2].get(k)) * fact;
}

Vec3 eval_curve(const CurveGerm& g, double t) {
  return Vec3(jet_eval(g.x[0], t), jet_eval(g.x[1], t), jet_eval(g.x[2], t));
}

CurveFn curve_evaluator(const CurveGerm& g) {
  return [g](double t) { return eval_curve(g, t); };
}

const char* to_string(CurveClass c) {
  switch (c) {
    case CurveClass::Regular: return "Regular";
    case CurveClass::AType: return "AType";
    case CurveClass::Type23: return "Type23";
    case CurveClass::Degenerate: return "Degenerate";
  }
  return "?";
}

CurveClass classify_curve(const CurveGerm& g, double tol) {
  if (g.order() < 3) {
    throw HypothesisFailed(
        "classify_curve: order must be >= 3 to separate the cusp types");
  }
  if (curve_deriv0(g, 1).norm() > tol) return CurveClass::Regular;
  const Vec3 d2 = curve_deriv0(g, 2);
  if (d2.norm() <= tol) return CurveClass::Degenerate;
  if (d2.cross(curve_deriv0(g, 3)).norm() > tol) return CurveClass::Type23;
  return CurveClass::AType;
}

namespace {

void require_atype(const CurveGerm& g, const char* who) {
  const CurveClass c = classify_curve(g);
  if (c != CurveClass::AType && c != CurveClass::Type23) {
    throw HypothesisFailed(std::string(who) +
                           ": needs gamma'(0)=0 with gamma''(0) != 0");
  }
}

void require_type23(const CurveGerm& g, const char* who) {
  if (classify_curve(g) != CurveClass::Type23) {
    throw HypothesisFailed(std::string(who) +
                           ": needs gamma''(0) x gamma'''(0) != 0");
  }
}

// The germ is the polynomial given by its coefficients, so re-embedding it
// at a higher order is exact; it keeps the later quotient/composition chains
// from truncating below the coefficients we need.
Jet1Vec3 lifted(const CurveGerm& g, int extra) {
  const int ord = g.order() + extra;
  return {truncated(g.x[0], ord), truncated(g.x[1], ord),
          truncated(g.x[2], ord)};
}

}  // namespace

double cuspidal_curvature(const CurveGerm& g) {
  require_atype(g, "cuspidal_curvature");
  const Vec3 d2 = curve_deriv0(g, 2);
  const Vec3 d3 = g.order() >= 3 ? curve_deriv0(g, 3) : Vec3::Zero();
  return d2.cross(d3).norm() / std::pow(d2.norm(), 2.5);
}

double cuspidal_torsion(const CurveGerm& g) {
  require_type23(g, "cuspidal_torsion");
  if (g.order() < 4) {
    throw HypothesisFailed("cuspidal_torsion: needs a 4-jet");
  }
  const Vec3 d2 = curve_deriv0(g, 2);
  const Vec3 d3 = curve_deriv0(g, 3);
  const Vec3 d4 = curve_deriv0(g, 4);
  const double det = d2.cross(d3).dot(d4);
  return std::sqrt(d2.norm()) * det / d2.cross(d3).squaredNorm();
}

double sigma_sing(const CurveGerm& g) {
  require_atype(g, "sigma_sing");
  if (g.order() < 4) {
    throw HypothesisFailed("sigma_sing: needs a 4-jet");
  }
  const Vec3 d2 = curve_deriv0(g, 2);
  const Vec3 d3 = curve_deriv0(g, 3);
  const Vec3 d4 = curve_deriv0(g, 4);
  const double dot22 = d2.squaredNorm();
  const Vec3 c23 = d2.cross(d3);
  const double num =
      c23.dot(d2.cross(d4)) - 2.0 * c23.squaredNorm() * d2.dot(d3) / dot22;
  return num / std::pow(dot22, 11.0 / 4.0);
}

namespace {

// Shared pieces of the half-arclength expansions.  For an A-type germ
// |gamma'|^2 = t^2 m(t) with m(0) = |gamma''(0)|^2 > 0, and the signed
// arclength from 0 is sgn(t) t^2 q(t), q as below.
struct CuspSeries {
  Jet1 m;  // |gamma'|^2 / t^2
  Jet1 q;  // arclength / t^2 on t > 0; q(0) = |gamma''(0)| / 2
};

CuspSeries cusp_series_core(const CurveGerm& g) {
  const Jet1Vec3 x = lifted(g, 8);
  const Jet1Vec3 d1 = {jet_derivative(x[0]), jet_derivative(x[1]),
                       jet_derivative(x[2])};
  CuspSeries out;
  out.m = jet_div_exact(jdot(d1, d1), 2);
  const Jet1 integrand = Jet1::variable(out.m.order()) * jet_sqrt(out.m);
  out.q = jet_div_exact(jet_antiderivative(integrand), 2);
  return out;
}

}  // namespace

Jet1 half_arclength_series(const CurveGerm& g) {
  require_atype(g, "half_arclength_series");
  const CuspSeries s = cusp_series_core(g);
  const Jet1 w = Jet1::variable(s.q.order()) * jet_sqrt(s.q);
  return truncated(w, std::min(w.order(), g.order()));
}

Jet1 cusp_kappa_series(const CurveGerm& g) {
  require_type23(g, "cusp_kappa_series");
  const CuspSeries s = cusp_series_core(g);
  const Jet1Vec3 x = lifted(g, 8);
  const Jet1Vec3 d1 = {jet_derivative(x[0]), jet_derivative(x[1]),
                       jet_derivative(x[2])};
  const Jet1Vec3 d2 = {jet_derivative(d1[0]), jet_derivative(d1[1]),
                       jet_derivative(d1[2])};
  const Jet1Vec3 cr = jcross(d1, d2);
  // |gamma' x gamma''|^2 = t^4 n(t); kappa = sqrt(n) / (|t| m^{3/2}) and
  // sqrt|s_g| = |t| sqrt(q), so the product is smooth.
  const Jet1 n = jet_div_exact(jdot(cr, cr), 4);
  const Jet1 f = jet_sqrt(s.q) * jet_sqrt(n) * jet_inv(s.m * jet_sqrt(s.m));
  return truncated(f, std::min(f.order(), g.order()));
}

Jet1 cusp_tau_series(const CurveGerm& g) {
  require_type23(g, "cusp_tau_series");
  if (g.order() < 4) {
    throw HypothesisFailed("cusp_tau_series: needs a 4-jet");
  }
  const CuspSeries s = cusp_series_core(g);
  const Jet1Vec3 x = lifted(g, 8);
  const Jet1Vec3 d1 = {jet_derivative(x[0]), jet_derivative(x[1]),
                       jet_derivative(x[2])};
  const Jet1Vec3 d2 = {jet_derivative(d1[0]), jet_derivative(d1[1]),
                       jet_derivative(d1[2])};
  const Jet1Vec3 d3 = {jet_derivative(d2[0]), jet_derivative(d2[1]),
                       jet_derivative(d2[2])};
  const Jet1Vec3 cr = jcross(d1, d2);
  const Jet1 n = jet_div_exact(jdot(cr, cr), 4);
  // det(gamma', gamma'', gamma''') = t^3 d(t); tau = d / (t n) and
  // sgn(t) sqrt|s_g| = t sqrt(q).
  const Jet1 det = jet_div_exact(jdot(cr, d3), 3);
  const Jet1 f = jet_sqrt(s.q) * det * jet_inv(n);
  return truncated(f, std::min(f.order(), g.order()));
}

double kappa_sing_prime(const CurveGerm& g) {
  return cusp_kappa_series(g).get(1);
}

namespace {

// Signed arclength of g from 0 to t by composite Simpson on the
// finite-difference speed; independent of the jet expansions above.
double arclength_fd(const CurveFn& c, double t, int panels) {
  const double h = t / (2 * panels);
  auto speed = [&](double s) {
    if (s == 0.0) return 0.0;
    const double step = std::min(1e-3, std::abs(s) / 4.0);
    return finite_diff(c, s, 1, step).norm();
  };
  double sum = speed(0.0) + speed(t);
  for (int i = 1; i < 2 * panels; ++i) {
    sum += speed(i * h) * ((i % 2) ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

// Polynomial extrapolation to 0 through (t_j, y_j) (Neville).
double extrapolate_to_zero(std::vector<double> t, std::vector<double> y) {
  const int n = static_cast<int>(t.size());
  for (int level = 1; level < n; ++level) {
    for (int i = n - 1; i >= level; --i) {
      y[i] = (t[i - level] * y[i] - t[i] * y[i - 1]) / (t[i - level] - t[i]);
    }
  }
  return y[n - 1];
}

enum class WhichLimit { Kappa, Tau };

double limit_common(const CurveGerm& g, const LimitParams& p, WhichLimit w) {
  require_atype(g, "limit");
  if (p.samples < 3 || p.t_min <= 0.0 || p.ratio <= 1.0) {
    throw HypothesisFailed("limit: need samples >= 3, t_min > 0, ratio > 1");
  }
  const CurveFn c = curve_evaluator(g);
  std::vector<double> ts(p.samples), ys(p.samples);
  for (int j = 0; j < p.samples; ++j) {
    const double t = p.t_min * std::pow(p.ratio, j);
    // Keep the whole difference stencil (offsets up to 3h at the coarse
    // step) strictly on the positive side.
    const double h = t / 8.0;
    const FrenetData fr = frenet_kappa_tau(c, t, h);
    const double root = std::sqrt(std::abs(arclength_fd(c, t, 64)));
    ts[j] = t;
    ys[j] = root * (w == WhichLimit::Kappa ? fr.kappa : fr.tau);
  }
  return extrapolate_to_zero(ts, ys);
}

}  // namespace

double limit_kappa(const CurveGerm& g, const LimitParams& p) {
  return limit_common(g, p, WhichLimit::Kappa);
}

double limit_tau(const CurveGerm& g, const LimitParams& p) {
  return limit_common(g, p, WhichLimit::Tau);
}

CurveNormalForm curve_normal_form(const CurveGerm& g, int degree) {
  require_atype(g, "curve_normal_form");
  if (degree < 3) {
    throw HypothesisFailed("curve_normal_form: degree must be >= 3");
  }
  if (g.order() < degree) {
    throw HypothesisFailed("curve_normal_form: germ order below the degree");
  }

  // Rotation: gamma''(0) to the first axis, gamma'''(0) into the upper half
  // of the (1,2)-plane.  An A-type germ whose third derivative is parallel
  // to the second leaves the second row free; any unit vector orthogonal to
  // the first works, chosen deterministically from the coordinate axes.
  const Vec3 d2 = curve_deriv0(g, 2);
  const Vec3 d3 = g.order() >= 3 ? curve_deriv0(g, 3) : Vec3::Zero();
  const Vec3 r1 = d2.normalized();
  Vec3 w = d3 - d3.dot(r1) * r1;
  if (w.norm() <= kTauZero * std::max(1.0, d3.norm())) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(r1[i]) < std::abs(r1[best])) best = i;
    }
    w = Vec3::Unit(best) - r1[best] * r1;
  }
  const Vec3 r2 = w.normalized();
  const Vec3 r3 = r1.cross(r2);
  Mat3 rot;
  rot.row(0) = r1;
  rot.row(1) = r2;
  rot.row(2) = r3;

  const Jet1Vec3 x = lifted(g, degree + 8);
  Jet1Vec3 h;
  for (int i = 0; i < 3; ++i) {
    h[i] = rot(i, 0) * x[0] + rot(i, 1) * x[1] + rot(i, 2) * x[2];
  }

  // First component = t^2 p(t), p(0) = |gamma''(0)|/2 > 0; the reparameter
  // s = t sqrt(2 p(t)) makes it exactly s^2/2, and its compositional
  // inverse is orientation-preserving.
  const Jet1 p = jet_div_exact(h[0], 2);
  const Jet1 s_of_t = Jet1::variable(p.order()) * jet_sqrt(2.0 * p);
  const Jet1 t_of_s = jet_invert(s_of_t);

  CurveNormalForm out;
  out.degree = degree;
  out.rotation = rot;
  out.reparam = truncated(t_of_s, std::min(t_of_s.order(), g.order()));

  Jet1Vec3 red;
  for (int i = 0; i < 3; ++i) {
    red[i] = truncated(jet_compose(h[i], t_of_s), degree);
  }
  // Retraces of the construction: first component s^2/2, nothing of low
  // degree in the others.
  red[0].set(2, 0.5);
  for (int k = 3; k <= degree; ++k) red[0].set(k, 0.0);
  red[1].set(2, 0.0);
  red[2].set(2, 0.0);
  red[2].set(3, 0.0);
  out.curve = CurveGerm{red};

  double fact = 2.0;
  for (int k = 3; k <= degree; ++k) {
    fact *= k;
    out.gamma2.push_back(red[1].get(k) * fact);
    if (k >= 4) out.gamma3.push_back(red[2].get(k) * fact);
  }
  return out;
}

ReconstructionResult reconstruct_curve(const RealFn& alpha, const RealFn& beta,
                                       double t_lo, double t_hi, int steps,
                                       const Mat3& frame0) {
  if (!(t_lo <= 0.0 && 0.0 <= t_hi) || t_lo == t_hi) {
    throw HypothesisFailed("reconstruct_curve: need t_lo <= 0 <= t_hi");
  }
  if (steps < 2) {
    throw HypothesisFailed("reconstruct_curve: need at least 2 steps");
  }

  struct State {
    Mat3 a;
    Vec3 g;
  };
  auto rhs = [&](double t, const State& s) {
    Mat3 skew = Mat3::Zero();
    const double al = alpha(t), be = beta(t);
    if (!(al > 0.0)) {
      throw HypothesisFailed("reconstruct_curve: alpha must stay positive");
    }
    skew(0, 1) = -al;
    skew(1, 0) = al;
    skew(1, 2) = -be;
    skew(2, 1) = be;
    State d;
    d.a = 2.0 * s.a * skew;
    d.g = 2.0 * t * s.a.col(0);
    return d;
  };
  auto step_rk4 = [&](double t, double dt, const State& s) {
    const State k1 = rhs(t, s);
    const State s2{s.a + 0.5 * dt * k1.a, s.g + 0.5 * dt * k1.g};
    const State k2 = rhs(t + 0.5 * dt, s2);
    const State s3{s.a + 0.5 * dt * k2.a, s.g + 0.5 * dt * k2.g};
    const State k3 = rhs(t + 0.5 * dt, s3);
    const State s4{s.a + dt * k3.a, s.g + dt * k3.g};
    const State k4 = rhs(t + dt, s4);
    State out;
    out.a = s.a + dt / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
    out.g = s.g + dt / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);
    return out;
  };

  const double span = t_hi - t_lo;
  int pos_steps = static_cast<int>(std::lround(steps * t_hi / span));
  if (t_hi > 0.0 && pos_steps == 0) pos_steps = 1;
  if (t_hi == 0.0) pos_steps = 0;
  int neg_steps = steps - pos_steps;
  if (t_lo < 0.0 && neg_steps == 0) neg_steps = 1;
  if (t_lo == 0.0) neg_steps = 0;

  ReconstructionResult res;
  std::vector<double> t_neg;
  std::vector<Vec3> g_neg;
  std::vector<Mat3> a_neg;

  auto integrate = [&](int n, double dt, std::vector<double>& ts,
                       std::vector<Vec3>& gs, std::vector<Mat3>& as) {
    State s{frame0, Vec3::Zero()};
    double t = 0.0;
    for (int i = 0; i < n; ++i) {
      s = step_rk4(t, dt, s);
      t += dt;
      const Mat3 gram = s.a.transpose() * s.a;
      const double drift = (gram - Mat3::Identity()).cwiseAbs().maxCoeff();
      res.max_ortho_drift = std::max(res.max_ortho_drift, drift);
      s.a = nearest_rotation(s.a);
      ts.push_back(t);
      gs.push_back(s.g);
      as.push_back(s.a);
    }
  };

  if (neg_steps > 0) {
    integrate(neg_steps, t_lo / neg_steps, t_neg, g_neg, a_neg);
  }
  for (int i = neg_steps - 1; i >= 0; --i) {
    res.t.push_back(t_neg[i]);
    res.gamma.push_back(g_neg[i]);
    res.frame.push_back(a_neg[i]);
  }
  res.t.push_back(0.0);
  res.gamma.push_back(Vec3::Zero());
  res.frame.push_back(frame0);
  if (pos_steps > 0) {
    integrate(pos_steps, t_hi / pos_steps, res.t, res.gamma, res.frame);
  }
  return res;
}

}  // namespace cuspedge
