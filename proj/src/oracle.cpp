#include "cuspedge/oracle.hpp"

#include <cmath>
#include <vector>

#include <Eigen/SVD>

namespace cuspedge {

namespace {

// Central-difference weights on the stencil t + j*h, j = -order..order.
// Five points for k <= 2, seven for k = 3, 4 keep the truncation error at
// O(h^4) so a single Richardson step is already very accurate.
template <typename V, typename F>
V central_diff(const F& f, double t, int k, double h) {
  auto at = [&](int j) { return f(t + j * h); };
  switch (k) {
    case 0:
      return at(0);
    case 1:
      return (at(-2) - V(8.0 * at(-1)) + V(8.0 * at(1)) - at(2)) / (12.0 * h);
    case 2:
      return (V(-at(-2)) + V(16.0 * at(-1)) - V(30.0 * at(0)) +
              V(16.0 * at(1)) - at(2)) /
             (12.0 * h * h);
    case 3:
      return (at(-3) - V(8.0 * at(-2)) + V(13.0 * at(-1)) - V(13.0 * at(1)) +
              V(8.0 * at(2)) - at(3)) /
             (8.0 * h * h * h);
    case 4:
      return (V(-at(-3)) + V(12.0 * at(-2)) - V(39.0 * at(-1)) +
              V(56.0 * at(0)) - V(39.0 * at(1)) + V(12.0 * at(2)) - at(3)) /
             (6.0 * h * h * h * h);
    default:
      throw HypothesisFailed("finite_diff: derivative order must be <= 4");
  }
}

template <typename V, typename F>
V richardson_diff(const F& f, double t, int k, double h) {
  // Both stencils have error c h^4 + O(h^6); eliminate the h^4 term.  The
  // partner evaluation uses 2h rather than h/2: at the default steps the
  // higher derivatives are rounding-limited, and halving the step would
  // amplify that noise 2^k-fold while the truncation term it buys is already
  // far below it.  Pairing upward keeps the requested step as the quiet,
  // dominant evaluation.
  const V coarse = central_diff<V>(f, t, k, 2.0 * h);
  const V fine = central_diff<V>(f, t, k, h);
  return (V(16.0 * fine) - coarse) / 15.0;
}

}  // namespace

double finite_diff(const RealFn& f, double t, int k, double h) {
  return richardson_diff<double>(f, t, k, h);
}

Vec3 finite_diff(const CurveFn& f, double t, int k, double h) {
  return richardson_diff<Vec3>(f, t, k, h);
}

FrenetData frenet_kappa_tau(const CurveFn& c, double t, double h) {
  const Vec3 d1 = finite_diff(c, t, 1, h);
  const Vec3 d2 = finite_diff(c, t, 2, h);
  const Vec3 d3 = finite_diff(c, t, 3, h);
  const double speed = d1.norm();
  if (speed < kTauZero) {
    throw HypothesisFailed("frenet_kappa_tau: singular point of the curve");
  }
  const Vec3 cr = d1.cross(d2);
  const double cr2 = cr.squaredNorm();
  if (cr2 < kTauZero * kTauZero) {
    throw HypothesisFailed("frenet_kappa_tau: curvature vanishes, torsion undefined");
  }
  FrenetData out;
  out.kappa = std::sqrt(cr2) / (speed * speed * speed);
  out.tau = cr.dot(d3) / cr2;
  return out;
}

Mat3 nearest_rotation(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

NormalEvaluator::NormalEvaluator(SurfFn f, double v_safe, double ladder_top,
                                 int ladder_levels)
    : f_(std::move(f)),
      v_safe_(v_safe),
      ladder_top_(ladder_top),
      ladder_levels_(ladder_levels) {}

Vec3 NormalEvaluator::raw_oriented(double u, double v) const {
  auto fu = [&](double uu) { return f_(uu, v); };
  auto fv = [&](double vv) { return f_(u, vv); };
  const Vec3 du = finite_diff(fu, u, 1, h_);
  const Vec3 dv = finite_diff(fv, v, 1, h_);
  Vec3 w = du.cross(dv);
  const double n = w.norm();
  if (n < 1e-14) {
    throw HypothesisFailed("NormalEvaluator: degenerate cross product");
  }
  w /= n;
  return v < 0.0 ? Vec3(-w) : w;
}

Vec3 NormalEvaluator::operator()(double u, double v) const {
  if (std::abs(v) >= v_safe_) return raw_oriented(u, v);

  // Evaluate at v_k = sign * ladder_top / 2^k and extrapolate the polynomial
  // through (v_k, n(v_k)) down to the requested v.  The normal of a front
  // extends smoothly across v = 0, so the ladder converges fast.
  const double sign = (v < 0.0) ? -1.0 : 1.0;
  std::vector<double> nodes(ladder_levels_);
  std::vector<Vec3> vals(ladder_levels_);
  for (int k = 0; k < ladder_levels_; ++k) {
    nodes[k] = sign * ladder_top_ / static_cast<double>(1 << k);
    vals[k] = raw_oriented(u, nodes[k]);
  }
  // Neville's scheme at the query point.
  for (int level = 1; level < ladder_levels_; ++level) {
    for (int i = ladder_levels_ - 1; i >= level; --i) {
      const double x0 = nodes[i - level];
      const double x1 = nodes[i];
      vals[i] = ((v - x0) * vals[i] - (v - x1) * vals[i - 1]) / (x1 - x0);
    }
  }
  Vec3 out = vals[ladder_levels_ - 1];
  return out / out.norm();
}

EdgeCurveData curve_on_surface_invariants(const CurveFn& c,
                                          const CurveFn& n_along, double t,
                                          double h) {
  const Vec3 d1 = finite_diff(c, t, 1, h);
  const Vec3 d2 = finite_diff(c, t, 2, h);
  const double s2 = d1.squaredNorm();
  if (s2 < kTauZero * kTauZero) {
    throw HypothesisFailed("curve_on_surface_invariants: singular curve point");
  }
  const Vec3 n = n_along(t);
  EdgeCurveData out;
  out.kappa_nb = d2.dot(n) / s2;
  out.kappa_gb = d1.cross(d2).dot(n) / (s2 * std::sqrt(s2));
  return out;
}

}  // namespace cuspedge
