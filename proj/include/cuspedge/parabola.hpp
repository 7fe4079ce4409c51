#pragma once

// The curvature parabola of a rank-one surface-germ: the image of the unit
// conic of the first fundamental form under the second derivatives projected
// onto the normal plane N0f.  For a cuspidal edge it degenerates to a
// half-line; the distance from the origin of N0f to the line carrying it is
// the umbilic curvature.

#include <array>

#include "cuspedge/surface.hpp"

namespace cuspedge {

enum class ParabolaKind { Parabola, Line, HalfLine, Point };

const char* to_string(ParabolaKind k);

// Degenerate conic image in the normal plane, in ambient coordinates.
//
//   Point:     the single point `basepoint`
//   Line:      basepoint + w direction,                      w in R
//   HalfLine:  basepoint + w direction,                      w >= 0
//   Parabola:  basepoint + w direction + quadratic_coeff w^2 axis
//
// `basepoint` is the endpoint for a half-line and the vertex for a parabola.
// `direction` (and `axis`) are unit vectors lying in the normal plane;
// `axis` is the opening direction, orthogonal to `direction`.
struct CurvatureParabola {
  ParabolaKind kind = ParabolaKind::Point;
  Vec3 basepoint = Vec3::Zero();
  Vec3 direction = Vec3::Zero();      // zero for Point
  double quadratic_coeff = 0.0;       // Parabola only
  Vec3 axis = Vec3::Zero();           // Parabola only
  std::array<Vec3, 2> normal_plane_basis{Vec3::Zero(), Vec3::Zero()};

  Vec3 eval(double w) const;
};

// Points of the unit conic {E a^2 + 2F a b + G b^2 = 1} of the (degenerate)
// first fundamental form at the origin.  The conic is a pair of parallel
// lines; `t` runs along them and `branch` (+1/-1) selects the line.
std::array<double, 2> conic_point(const SurfaceGerm& f, double t,
                                  int branch = +1);

// f_uu a^2 + 2 f_uv a b + f_vv b^2 at the origin, projected onto the normal
// plane.  Composing with conic_point traces the curvature parabola directly;
// curvature_parabola().eval must reproduce these points.
Vec3 projected_hessian_point(const SurfaceGerm& f, double a, double b);

// Requires rank df(0) == 1; throws HypothesisFailed otherwise.
CurvatureParabola curvature_parabola(const SurfaceGerm& f,
                                     double tol = kTauZero);

// Distance from the origin of the normal plane to the line carrying the
// degenerate conic (the point itself for a Point).  Not defined when the
// conic is an honest parabola; throws HypothesisFailed.
double umbilic_curvature(const CurvatureParabola& p);

// Vertex of the half-line, the intersection of the principal-normal line of
// the boundary image with the line carrying the half-line, and their
// distance.  Ambient coordinates are the canonical ones of the reduction.
// Requires a transverse boundary and a nonvanishing limiting normal
// curvature; throws HypothesisFailed otherwise.
struct VertexData {
  Vec3 vertex = Vec3::Zero();
  Vec3 intersection = Vec3::Zero();
  double dist = 0.0;
};

VertexData vertex_and_intersection(const SurfaceGerm& f, const PlaneCurve& b);

}  // namespace cuspedge
