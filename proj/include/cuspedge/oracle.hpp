#pragma once

// Independent numeric ground truth: finite differences, Frenet curvature and
// torsion of regular curves, and normal/geodesic curvature of a curve lying
// on a parametrized surface whose normal degenerates along v = 0.  Nothing
// in here touches jet arithmetic, so agreement between this module and the
// closed forms is a genuine cross-check.

#include <functional>

#include <Eigen/Dense>

#include "cuspedge/errors.hpp"

namespace cuspedge {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

using RealFn = std::function<double(double)>;
using CurveFn = std::function<Vec3(double)>;
using SurfFn = std::function<Vec3(double, double)>;

// k-th derivative (k <= 4) by central differences with one Richardson step
// (h and 2h).  The caller owns the step choice.
double finite_diff(const RealFn& f, double t, int k, double h = 1e-3);
Vec3 finite_diff(const CurveFn& f, double t, int k, double h = 1e-3);

struct FrenetData {
  double kappa = 0.0;
  double tau = 0.0;
};

// Curvature/torsion of a regular space curve at t.  Throws HypothesisFailed
// at points where the needed denominators vanish.
FrenetData frenet_kappa_tau(const CurveFn& c, double t, double h = 1e-3);

// Closest rotation matrix in Frobenius norm (special orthogonal polar
// factor).
Mat3 nearest_rotation(const Mat3& m);

// Unit normal of a surface whose first fundamental form degenerates along
// v = 0: away from that line it is normalize(f_u x f_v) with the sign glued
// to the v > 0 side; near the line the value is obtained by polynomial
// extrapolation in v from a ladder of safely-evaluable nodes.
class NormalEvaluator {
 public:
  explicit NormalEvaluator(SurfFn f, double v_safe = 1e-3,
                           double ladder_top = 0.08, int ladder_levels = 5);

  Vec3 operator()(double u, double v) const;

 private:
  Vec3 raw_oriented(double u, double v) const;  // normalize(f_u x f_v) * sgn(v)

  SurfFn f_;
  double v_safe_;
  double ladder_top_;
  int ladder_levels_;
  double h_ = 1e-4;  // step for the interior cross-product differences
};

struct EdgeCurveData {
  double kappa_nb = 0.0;  // <c'', n> / |c'|^2
  double kappa_gb = 0.0;  // det(c', c'', n) / |c'|^3
};

// Normal and geodesic curvature of a regular space curve c with a unit
// normal field n(t) along it.
EdgeCurveData curve_on_surface_invariants(const CurveFn& c,
                                          const CurveFn& n_along, double t,
                                          double h = 1e-3);

}  // namespace cuspedge
