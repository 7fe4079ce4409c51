#include "cuspedge/boundary.hpp"

#include <cmath>
#include <limits>

#include "cuspedge/curves.hpp"
#include "cuspedge/jets.hpp"

namespace cuspedge {

namespace {

// Step for the outer finite differences applied to the pointwise curvature
// functions in case1_numeric.  Those functions are themselves built from
// inner differences at the oracle's default step, so the outer h cannot be
// anywhere near as small without amplifying their noise floor.
constexpr double kOuterStep = 1e-2;

Vec3 eval_jet_vec(const Jet2Vec3& w, double u, double v) {
  return Vec3(jet_eval(w[0], u, v), jet_eval(w[1], u, v), jet_eval(w[2], u, v));
}

}  // namespace

const char* to_string(BoundaryKind k) {
  return k == BoundaryKind::Transverse ? "transverse" : "tangent";
}

BoundaryClass classify_boundary(const SurfaceGerm& f, const PlaneCurve& b,
                                double tol) {
  require_adapted(f, tol);
  const double du = b.x.get(1);
  const double dv = b.y.get(1);
  if (std::abs(du) <= tol && std::abs(dv) <= tol) {
    throw HypothesisFailed("classify_boundary: boundary curve is singular at 0");
  }
  // On an adapted germ the kernel of df_0 is the v-axis, so the boundary is
  // transverse exactly when its u-velocity survives.  In that case
  // edge'(0) = f_u(0) while bhat'(0) = b1'(0) f_u(0)  (f_v vanishes along the
  // edge), which pins the tangent ratio without touching the image curves.
  BoundaryClass out;
  if (std::abs(du) > tol) {
    out.kind = BoundaryKind::Transverse;
    out.l = 1.0 / du;
  } else {
    out.kind = BoundaryKind::Tangent;
    out.l = 0.0;
  }
  return out;
}

Case1Report case1_closed(const NormalFormData& nf, FormulaVariant variant) {
  if (!nf.is_case1()) {
    throw HypothesisFailed("case1_closed: boundary data is tangent-case");
  }
  const Case1Coeffs& c = nf.case1();
  const double ep = c.eps, c1 = c.c1, c2 = c.c2;
  const double a20 = nf.a20, a30 = nf.a30;
  const double b20 = nf.b20, b30 = nf.b30, b12 = nf.b12, b03 = nf.b03;

  const double q = c1 * c1 + a20;  // shared subexpression of every formula
  const double k0sq = b20 * b20 + q * q;

  Case1Report r;
  r.kappa = std::sqrt(k0sq);
  r.kappa_nb = b20;
  r.alpha = std::abs(c1);

  if (variant == FormulaVariant::Verified) {
    r.kappa_nb_prime = ep * b03 * c1 * c1 * c1 / 2 + 2 * b12 * c1 * c1 -
                       ep * a20 * b03 * c1 / 2 + b30 - a20 * b12;
    r.kappa_gb = ep * q;
    r.kappa_gb_prime = ep * a30 + b03 * b20 * c1 / 2 + ep * b12 * b20 +
                       3 * c1 * c2;
  } else {
    r.kappa_nb_prime = b03 * c1 * c1 * c1 / 2 + 2 * ep * b12 * c1 * c1 -
                       a20 * b03 * c1 / 2 + ep * b30 - ep * a20 * b12;
    r.kappa_gb = -(ep * c1 * c1 + a20);
    r.kappa_gb_prime = -c1 * (ep * b03 * b20 / 2 + 3 * ep * c2) - a30 -
                       b12 * b20;
  }

  if (k0sq == 0.0) {
    // Straight boundary image to second order: no Frenet frame at 0.
    r.kappa_prime = std::numeric_limits<double>::quiet_NaN();
    r.tau = std::numeric_limits<double>::quiet_NaN();
    return r;
  }

  if (variant == FormulaVariant::Verified) {
    r.kappa_prime = (q * (a30 + 3 * ep * c1 * c2) +
                     b20 * (b30 + 3 * b12 * c1 * c1 + ep * b03 * c1 * c1 * c1)) /
                    r.kappa;
  } else {
    r.kappa_prime = (b20 * (b03 * c1 * c1 * c1 + 3 * ep * b12 * c1 * c1 +
                            ep * b30) +
                     q * (3 * c1 * c2 + ep * a30)) /
                    r.kappa;
  }
  // The torsion print is the one formula both conventions agree on.
  r.tau = (q * (ep * b03 * c1 * c1 * c1 + 3 * b12 * c1 * c1 + b30) -
           b20 * (3 * ep * c1 * c2 + a30)) /
          k0sq;
  return r;
}

Case1Report case1_numeric(const NormalFormData& nf, const NormalFormTail& tail) {
  if (!nf.is_case1()) {
    throw HypothesisFailed("case1_numeric: boundary data is tangent-case");
  }
  const double ep = nf.case1().eps;
  const SurfaceGerm f = synthesize_surface(nf, tail);
  const PlaneCurve b = synthesize_boundary(nf);

  const SurfFn sf = surface_evaluator(f);
  const Jet1 bx = b.x, by = b.y;
  const CurveFn bhat = [sf, bx, by](double t) {
    return sf(jet_eval(bx, t), jet_eval(by, t));
  };
  // Unit normal along the boundary, evaluated from its jet: the glued field
  // is smooth across the edge, so plain polynomial evaluation is valid on
  // both sides and adds no differencing noise of its own.
  const Jet2Vec3 nu = unit_normal_jet(f);
  const CurveFn n_along = [nu, bx, by](double t) {
    return eval_jet_vec(nu, jet_eval(bx, t), jet_eval(by, t));
  };

  Case1Report r;
  const FrenetData fr = frenet_kappa_tau(bhat, 0.0);
  r.kappa = fr.kappa;
  r.tau = fr.tau;

  const EdgeCurveData ec = curve_on_surface_invariants(bhat, n_along, 0.0);
  r.kappa_nb = ec.kappa_nb;
  r.kappa_gb = ec.kappa_gb;

  // Primed quantities are d/du with u = eps t along the boundary.
  const RealFn kappa_of_t = [&bhat](double t) {
    return frenet_kappa_tau(bhat, t).kappa;
  };
  const RealFn nb_of_t = [&bhat, &n_along](double t) {
    return curve_on_surface_invariants(bhat, n_along, t).kappa_nb;
  };
  const RealFn gb_of_t = [&bhat, &n_along](double t) {
    return curve_on_surface_invariants(bhat, n_along, t).kappa_gb;
  };
  r.kappa_prime = ep * finite_diff(kappa_of_t, 0.0, 1, kOuterStep);
  r.kappa_nb_prime = ep * finite_diff(nb_of_t, 0.0, 1, kOuterStep);
  r.kappa_gb_prime = ep * finite_diff(gb_of_t, 0.0, 1, kOuterStep);

  r.alpha = approaching_ratio(f, b);
  return r;
}

Case2Report case2_closed(const NormalFormData& nf, FormulaVariant variant) {
  if (nf.is_case1()) {
    throw HypothesisFailed("case2_closed: boundary data is transverse-case");
  }
  const Case2Coeffs& d = nf.case2();
  const double ep = d.eps, d2 = d.d2, d3 = d.d3, d4 = d.d4;
  const double a20 = nf.a20, b20 = nf.b20, b12 = nf.b12, b03 = nf.b03;
  const double h5 = nf.h5_00;

  const double m = 1 + d2 * d2;
  const double den = b03 * b03 * m + d3 * d3;  // positive whenever b03 != 0

  Case2Report r;
  r.kappa_sing = std::sqrt(den) / std::pow(m, 1.25);
  r.beta_cosine = d2 / std::sqrt(m);
  if (variant == FormulaVariant::Verified) {
    r.tau_sing = std::pow(m, 0.25) *
                 (ep * b03 * d4 - 3 * ep * a20 * b03 * d2 * d2 * d2 -
                  6 * b12 * d2 * d3 - 3 * b20 * d2 * d2 * d3 - 24 * h5 * d3) /
                 den;
    r.beta = d2;
  } else {
    r.tau_sing = std::sqrt(m) *
                 (-3 * ep * a20 * b03 * d2 * d2 * d2 + 3 * b20 * d2 * d2 * d3 +
                  6 * b12 * d2 * d3 - h5 * d3 + ep * b03 * d4) /
                 std::pow(den, 0.75);
    r.beta = r.beta_cosine;
  }
  return r;
}

Case2Report case2_numeric(const NormalFormData& nf, const NormalFormTail& tail) {
  if (nf.is_case1()) {
    throw HypothesisFailed("case2_numeric: boundary data is transverse-case");
  }
  const SurfaceGerm f = synthesize_surface(nf, tail);
  const PlaneCurve b = synthesize_boundary(nf);
  const CurveGerm bh = pushforward(f, b);

  Case2Report r;
  r.kappa_sing = cuspidal_curvature(bh);
  r.tau_sing = cuspidal_torsion(bh);
  r.beta = angle_beta(f, b);

  // Cosine against the edge velocity of the synthesized germ itself.
  const Vec3 t0(f.x[0].get(1, 0), f.x[1].get(1, 0), f.x[2].get(1, 0));
  const Vec3 dd = curve_deriv0(bh, 2);
  r.beta_cosine = t0.dot(dd) / (t0.norm() * dd.norm());
  return r;
}

double approaching_ratio(const SurfaceGerm& f, const PlaneCurve& b,
                         const Jet1* reparam_s) {
  PlaneCurve bb = b;
  if (reparam_s != nullptr) {
    if (std::abs(reparam_s->get(1)) <= kTauZero) {
      throw HypothesisFailed(
          "approaching_ratio: boundary reparametrization is singular at 0");
    }
    bb = make_plane_curve(jet_compose(b.x, *reparam_s),
                          jet_compose(b.y, *reparam_s));
  }
  const BoundaryClass cls = classify_boundary(f, bb);
  if (cls.kind != BoundaryKind::Transverse) {
    throw HypothesisFailed(
        "approaching_ratio: boundary is tangent to the edge at 0");
  }

  const CurveGerm edge = make_curve_germ(
      restrict_v0(f.x[0]), restrict_v0(f.x[1]), restrict_v0(f.x[2]));
  const CurveGerm bh = pushforward(f, bb);

  const Vec3 e1 = curve_deriv0(edge, 1);
  const Vec3 e2 = curve_deriv0(edge, 2);
  const Vec3 g1 = curve_deriv0(bh, 1);
  const Vec3 g2 = curve_deriv0(bh, 2);
  const Jet2Vec3 nu = unit_normal_jet(f);
  const Vec3 n0 = eval_jet_vec(nu, 0.0, 0.0);

  // Difference of the two curvature vectors seen against the normal plane.
  // Both tangents at 0 are parallel here, so the tangential parts of the
  // second derivatives cancel inside the determinant and nothing depends on
  // how either curve is parametrized, flips included.
  const Vec3 col = e2 / e1.squaredNorm() - g2 / g1.squaredNorm();
  const double det = e1.dot(col.cross(n0));
  return std::sqrt(std::abs(det) / e1.norm());
}

double angle_beta(const SurfaceGerm& f, const PlaneCurve& b) {
  const ReductionResult rr = reduce_to_normal_form(f, b);
  if (rr.data.is_case1()) {
    throw HypothesisFailed("angle_beta: boundary is transverse to the edge at 0");
  }
  return rr.data.case2().d2;
}

}  // namespace cuspedge
