#include "cuspedge/parabola.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace cuspedge {

namespace {

struct FrameData {
  Vec3 tangent;           // unit direction of the image of df_0
  Vec3 n1, n2;            // orthonormal basis of the normal plane
  Vec3 huu, huv, hvv;     // projected second derivatives
  double ee, ff, gg;      // first fundamental form at 0
};

Vec3 second_deriv(const SurfaceGerm& f, int du, int dv) {
  // raw coefficient times the factorial of the requested order (2 here)
  const double scale = (du == 1 && dv == 1) ? 1.0 : 2.0;
  return scale * Vec3(f.x[0].get(du, dv), f.x[1].get(du, dv),
                      f.x[2].get(du, dv));
}

FrameData build_frame(const SurfaceGerm& f, double tol) {
  const Vec3 fu(f.x[0].get(1, 0), f.x[1].get(1, 0), f.x[2].get(1, 0));
  const Vec3 fv(f.x[0].get(0, 1), f.x[1].get(0, 1), f.x[2].get(0, 1));

  Eigen::Matrix<double, 3, 2> jac;
  jac.col(0) = fu;
  jac.col(1) = fv;
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(
      jac, Eigen::ComputeFullU);
  if (svd.singularValues()(0) <= tol) {
    throw HypothesisFailed("curvature parabola: differential has rank 0 at the origin");
  }
  if (svd.singularValues()(1) > tol) {
    throw HypothesisFailed("curvature parabola: germ is an immersion at the origin");
  }

  FrameData fr;
  fr.tangent = svd.matrixU().col(0);
  // Deterministic orientation: make the tangent agree with the larger of
  // f_u, f_v instead of whatever sign the factorization produced.
  const Vec3 dom = fu.norm() >= fv.norm() ? fu : fv;
  if (fr.tangent.dot(dom) < 0.0) fr.tangent = -fr.tangent;

  // Normal-plane basis from the most transverse coordinate axis, ties going
  // to the later axis so the canonical edge direction e1 yields (e2, e3).
  int j = 0;
  for (int k = 1; k < 3; ++k) {
    if (std::abs(fr.tangent(k)) <= std::abs(fr.tangent(j))) j = k;
  }
  fr.n1 = Vec3::Unit(j).cross(fr.tangent).normalized();
  fr.n2 = fr.tangent.cross(fr.n1);

  const auto project = [&fr](const Vec3& w) -> Vec3 {
    return w - w.dot(fr.tangent) * fr.tangent;
  };
  fr.huu = project(second_deriv(f, 2, 0));
  fr.huv = project(second_deriv(f, 1, 1));
  fr.hvv = project(second_deriv(f, 0, 2));

  fr.ee = fu.dot(fu);
  fr.ff = fu.dot(fv);
  fr.gg = fv.dot(fv);
  return fr;
}

// The unit conic E a^2 + 2F a b + G b^2 = 1 of a rank-one form is the pair
// of lines (q . (a,b))^2 = 1.  Returns q scaled so the lines are q.r = +-1,
// plus the direction z along them.
void conic_lines(const FrameData& fr, Eigen::Vector2d* q, Eigen::Vector2d* z) {
  if (fr.ee >= fr.gg) {
    *q = Eigen::Vector2d(fr.ee, fr.ff) / std::sqrt(fr.ee);
  } else {
    *q = Eigen::Vector2d(fr.ff, fr.gg) / std::sqrt(fr.gg);
  }
  *z = Eigen::Vector2d(-(*q)(1), (*q)(0)).normalized();
}

Vec3 hessian_form(const FrameData& fr, const Eigen::Vector2d& x,
                  const Eigen::Vector2d& y) {
  return x(0) * y(0) * fr.huu + (x(0) * y(1) + x(1) * y(0)) * fr.huv +
         x(1) * y(1) * fr.hvv;
}

}  // namespace

const char* to_string(ParabolaKind k) {
  switch (k) {
    case ParabolaKind::Parabola: return "parabola";
    case ParabolaKind::Line: return "line";
    case ParabolaKind::HalfLine: return "half-line";
    case ParabolaKind::Point: return "point";
  }
  return "?";
}

Vec3 CurvatureParabola::eval(double w) const {
  switch (kind) {
    case ParabolaKind::Point:
      return basepoint;
    case ParabolaKind::Line:
    case ParabolaKind::HalfLine:
      return basepoint + w * direction;
    case ParabolaKind::Parabola:
      return basepoint + w * direction + quadratic_coeff * w * w * axis;
  }
  return basepoint;
}

std::array<double, 2> conic_point(const SurfaceGerm& f, double t, int branch) {
  const FrameData fr = build_frame(f, kTauZero);
  Eigen::Vector2d q, z;
  conic_lines(fr, &q, &z);
  const Eigen::Vector2d r0 = q / q.squaredNorm();
  const Eigen::Vector2d p = double(branch) * r0 + t * z;
  return {p(0), p(1)};
}

Vec3 projected_hessian_point(const SurfaceGerm& f, double a, double b) {
  const FrameData fr = build_frame(f, kTauZero);
  return hessian_form(fr, Eigen::Vector2d(a, b), Eigen::Vector2d(a, b));
}

CurvatureParabola curvature_parabola(const SurfaceGerm& f, double tol) {
  const FrameData fr = build_frame(f, tol);
  Eigen::Vector2d q, z;
  conic_lines(fr, &q, &z);
  const Eigen::Vector2d r0 = q / q.squaredNorm();

  // Along the conic line (a,b) = +-r0 + t z the image is
  //   c0 +- 2t m1 + t^2 m2,
  // and both sign branches trace the same set (t -> -t moves between them).
  const Vec3 c0 = hessian_form(fr, r0, r0);
  const Vec3 m1 = hessian_form(fr, r0, z);
  const Vec3 m2 = hessian_form(fr, z, z);

  CurvatureParabola out;
  out.normal_plane_basis = {fr.n1, fr.n2};

  if (m2.norm() > tol) {
    const Vec3 axis = m2.normalized();
    const Vec3 m1_perp = m1 - m1.dot(axis) * axis;
    if (m1_perp.norm() > tol) {
      // Honest parabola (cross-cap).  Reparametrize by the abscissa
      // w = 2t|m1_perp| measured from the vertex.
      const double tv = -m1.dot(axis) / m2.norm();
      out.kind = ParabolaKind::Parabola;
      out.basepoint = c0 + 2.0 * tv * m1 + tv * tv * m2;
      out.direction = m1_perp.normalized();
      out.axis = axis;
      out.quadratic_coeff = m2.norm() / (4.0 * m1_perp.squaredNorm());
      return out;
    }
    // The t^2 term dominates a collinear drift: a half-line along m2
    // starting at the extremum of t^2 + 2 t <m1,m2>/|m2|^2.
    const double mu = m1.dot(m2) / m2.squaredNorm();
    out.kind = ParabolaKind::HalfLine;
    out.basepoint = c0 - mu * mu * m2;
    out.direction = axis;
    return out;
  }
  if (m1.norm() > tol) {
    out.kind = ParabolaKind::Line;
    out.basepoint = c0;
    out.direction = m1.normalized();
    return out;
  }
  out.kind = ParabolaKind::Point;
  out.basepoint = c0;
  return out;
}

double umbilic_curvature(const CurvatureParabola& p) {
  if (p.kind == ParabolaKind::Parabola) {
    throw HypothesisFailed(
        "umbilic curvature: not defined for a genuine parabola");
  }
  if (p.kind == ParabolaKind::Point) return p.basepoint.norm();
  return (p.basepoint - p.basepoint.dot(p.direction) * p.direction).norm();
}

VertexData vertex_and_intersection(const SurfaceGerm& f, const PlaneCurve& b) {
  const ReductionResult rr = reduce_to_normal_form(f, b);
  if (!rr.data.is_case1()) {
    throw HypothesisFailed(
        "vertex_and_intersection: boundary is tangent to the edge at 0");
  }
  if (std::abs(rr.data.b20) <= kTauZero) {
    throw HypothesisFailed(
        "vertex_and_intersection: limiting normal curvature vanishes");
  }

  const CurvatureParabola delta = curvature_parabola(rr.reduced);
  if (delta.kind != ParabolaKind::HalfLine) {
    throw HypothesisFailed(
        "vertex_and_intersection: curvature conic is not a half-line");
  }

  // Principal normal of the boundary image at 0; it lies in the normal plane
  // because the boundary image is tangent to the edge image there.
  const CurveGerm bh = pushforward(rr.reduced, rr.boundary);
  const Vec3 g1 = curve_deriv0(bh, 1);
  const Vec3 g2 = curve_deriv0(bh, 2);
  const Vec3 tn = g1.normalized();
  const Vec3 pn = (g2 - g2.dot(tn) * tn).normalized();

  // Intersect { s * pn } with { V + w * direction } inside the normal plane.
  const Vec3& e1 = delta.normal_plane_basis[0];
  const Vec3& e2 = delta.normal_plane_basis[1];
  Eigen::Matrix2d lhs;
  lhs << pn.dot(e1), -delta.direction.dot(e1),
         pn.dot(e2), -delta.direction.dot(e2);
  const Eigen::Vector2d rhs(delta.basepoint.dot(e1), delta.basepoint.dot(e2));
  if (std::abs(lhs.determinant()) <= kTauZero) {
    throw HypothesisFailed(
        "vertex_and_intersection: normal line runs parallel to the conic");
  }
  const Eigen::Vector2d sw = lhs.inverse() * rhs;

  VertexData out;
  out.vertex = delta.basepoint;
  out.intersection = sw(0) * pn;
  out.dist = (out.vertex - out.intersection).norm();
  return out;
}

}  // namespace cuspedge
