#pragma once

// Flat ruled surfaces F(t,v) = gamma(t) + v delta(t) built from scalar data
// (x, y, kappa_delta) and an initial orthonormal pair (delta0, delta1):
//
//   delta''  = -delta + kappa_delta (delta x delta'),   |delta| = |delta'| = 1
//   gamma'   = x delta + y (delta)'                     (flat: no binormal part)
//
// The strip |v| <= eps is regular because |y| > eps there; extending to
// |v| <= M exposes the singular set {(t, -y(t))}.  A local minimum of y is
// where singularities are born under the extension.

#include <iosfwd>
#include <utility>
#include <vector>

#include "cuspedge/oracle.hpp"
#include "cuspedge/surface.hpp"

namespace cuspedge {

// Scalar function on an interval: either a polynomial in t or sampled values
// joined by a natural cubic spline.  Derivatives are exact for polynomials
// and spline derivatives otherwise.
class ScalarFn {
 public:
  static ScalarFn poly(std::vector<double> coeffs);
  static ScalarFn samples(std::vector<double> ts, std::vector<double> values);

  double operator()(double t) const;
  double deriv(double t, int k = 1) const;
  bool is_poly() const { return poly_; }

  // Taylor coefficients at t0 up to `order` (exact for polynomials, finite
  // differences for samples); used for local jets at a birth point.
  Jet1 local_jet(double t0, int order) const;

 private:
  ScalarFn() = default;

  bool poly_ = true;
  std::vector<double> coeffs_;           // polynomial case
  std::vector<double> ts_, vals_, m_;    // spline case (m_ = second derivatives)
};

struct RuledInput {
  ScalarFn x, y, kappa_delta;
  Vec3 delta0 = Vec3::UnitX();
  Vec3 delta1 = Vec3::UnitY();
  double eps = 0.0;   // half-width of the regular strip
  double M = 0.0;     // half-width of the extension, M > eps
  double t_lo = 0.0;
  double t_hi = 0.0;
};

// Validates the frame data (|delta0| = |delta1| = 1, <delta0,delta1> = 0
// within 1e-9, then re-orthonormalized exactly), 0 < eps < M, and
// t_lo <= 0 <= t_hi so the initial conditions sit inside the interval.
// Does not check |y| > eps; build_ruled reports that.
RuledInput make_ruled_input(ScalarFn x, ScalarFn y, ScalarFn kappa_delta,
                            const Vec3& delta0, const Vec3& delta1, double eps,
                            double M, double t_lo, double t_hi);

struct RuledSurface {
  std::vector<double> t;
  std::vector<Vec3> delta, ddelta;  // ruling direction and its derivative
  std::vector<Vec3> gamma;
  double max_frame_drift = 0.0;     // worst Gram-matrix deviation of
                                    // (delta, delta', delta x delta')
  bool strip_regular = true;        // |y| > eps held over the grid
};

// Integrates the sphere ODE for delta outward from t = 0 (RK4 with the frame
// snapped back to the nearest rotation each step) and then gamma' =
// x delta + y delta'.  z_fn, when given, adds z (delta x delta') to gamma' --
// such a surface is not flat and exists for negative tests.
RuledSurface build_ruled(const RuledInput& in, int steps,
                         const ScalarFn* z_fn = nullptr);

// max_t |det(gamma'(t), delta(t), delta'(t))| over the grid, by finite
// differences on gamma; flat iff below tau_flat.
double flatness_defect(const RuledSurface& s);
bool is_flat(const RuledSurface& s, double tau_flat = 1e-7);

// The singular set {(t, -y(t))} clipped to the extension strip |v| <= M.
std::vector<std::pair<double, double>> singular_set(const RuledInput& in,
                                                    int samples);

struct BirthReport {
  double t0 = 0.0;
  double v0 = 0.0;  // = -y(t0)
  bool is_cuspidal_edge = false;
  bool is_generic_birth = false;
  bool interior = true;        // false: minimum at an interval endpoint
  bool strip_boundary = false; // |y(t0)| within tolerance of eps or M
  // diagnostics
  double y_prime = 0.0;
  double y_second = 0.0;
  double y_prime_minus_x = 0.0;
  double kappa_delta_at = 0.0;
};

// Cuspidal-edge test at the singular point over t0: y'(t0) - x(t0) != 0 and
// kappa_delta(t0) != 0.  Fills the diagnostics; the genericity flag is left
// to find_births.
BirthReport classify_ruled_point(const RuledInput& in, double t0);

// Local minima of y with |y(t0)| <= M, located by a sign-change scan of y'
// and bisection refinement.  Interior minima are reported with
// is_generic_birth = (|y''(t0)| > tau_zero) && is_cuspidal_edge; flat minima
// (plateaus) therefore come out non-generic.  Endpoint minima of the closed
// interval are appended with interior = false and no genericity claim.
std::vector<BirthReport> find_births(const RuledInput& in,
                                     int scan_samples = 2048);

// Taylor expansion of F(t0+s, v0+w) - F(t0,v0) as a surface-germ, with the
// derivatives of delta obtained by differentiating its ODE at t0.  This is
// what lets the surface reduction cross-check a birth: the boundary line
// {w = 0} should reduce to a transverse boundary with c1 = 0, c2 != 0.
SurfaceGerm local_surface_jet(const RuledInput& in, double t0, double v0,
                              int order = kDefaultOrder);

struct RuledMesh {
  std::vector<Vec3> vertices;            // nt * nv grid, v-major rows
  std::vector<std::array<int, 3>> faces; // triangles, 0-based
  std::vector<bool> in_strip;            // per vertex: |v| <= eps
  std::vector<Vec3> singular_polyline;   // F(t, -y(t)) where it exists
  int nt = 0, nv = 0;
};

// Triangulated graph of F over [t_lo,t_hi] x [-M,M] with the regular strip
// flagged per vertex and the singular set sampled as a polyline.
RuledMesh mesh_export(const RuledInput& in, int nt, int nv);

// OBJ with face groups "strip" and "exterior" plus a separate line object
// for the singular set.
void write_obj(std::ostream& os, const RuledMesh& mesh);

}  // namespace cuspedge
