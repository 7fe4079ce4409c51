#pragma once

// Surface-germs with a cuspidal-edge singularity along v = 0: adapted
// coordinates, the front's unit normal as a jet, the degenerate-edge test,
// and numerical reduction to the canonical polynomial form
//
//   F(u,v) = (u,  a20/2 u^2 + a30/6 u^3 + v^2/2 + ...,
//                 b20/2 u^2 + b30/6 u^3 + b12/2 u v^2 + b03/6 v^3 + ...)
//
// with b20 >= 0, b03 != 0, together with the boundary curve transported
// into the same coordinates.

#include <variant>

#include "cuspedge/curves.hpp"
#include "cuspedge/jets.hpp"
#include "cuspedge/oracle.hpp"

namespace cuspedge {

struct SurfaceGerm {
  Jet2Vec3 x;

  int order() const { return x[0].order(); }
};

// Validates shared order and zero constant terms.
SurfaceGerm make_surface_germ(const Jet2& a, const Jet2& b, const Jet2& c);

Vec3 eval_surface(const SurfaceGerm& f, double u, double v);
SurfFn surface_evaluator(const SurfaceGerm& f);

// A plane curve-germ in the source, b(t) = (x(t), y(t)), b(0) = (0,0).
struct PlaneCurve {
  Jet1 x, y;

  int order() const { return x.order(); }
};

PlaneCurve make_plane_curve(const Jet1& x, const Jet1& y);

// The image of the boundary, f o b, as a curve-germ.
CurveGerm pushforward(const SurfaceGerm& f, const PlaneCurve& b);

// Adapted: the singular set is {v = 0} with null direction dv, i.e. f_v is
// divisible by v and f_u(0,0) != 0.
bool is_adapted(const SurfaceGerm& f, double tol = kTauZero);
void require_adapted(const SurfaceGerm& f, double tol = kTauZero);

// Jet of the unit normal nu = w/|w|, w = f_u x (f_v / v).  Requires adapted
// input and w(0,0) != 0.
Jet2Vec3 unit_normal_jet(const SurfaceGerm& f);

// f_u(0) != 0 and det(f_u, f_vv, f_vvv)(0,0) != 0, on adapted input.
bool is_cuspidal_edge(const SurfaceGerm& f, double tol = kTauZero);

struct Case1Coeffs {
  double eps = 1.0;  // +1 or -1
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

struct Case2Coeffs {
  double eps = 1.0;  // +1 or -1
  double d2 = 0.0, d3 = 0.0, d4 = 0.0;
};

struct NormalFormData {
  double a20 = 0.0, a30 = 0.0;
  double b20 = 0.0, b30 = 0.0, b12 = 0.0, b03 = 0.0;
  double h5_00 = 0.0;  // coefficient of v^4 in the third component
  std::variant<Case1Coeffs, Case2Coeffs> boundary;

  bool is_case1() const { return boundary.index() == 0; }
  const Case1Coeffs& case1() const { return std::get<Case1Coeffs>(boundary); }
  const Case2Coeffs& case2() const { return std::get<Case2Coeffs>(boundary); }
};

struct ReductionResult {
  NormalFormData data;
  SurfaceGerm reduced;      // R * (f o Theta), coefficientwise
  PlaneCurve boundary;      // Theta^{-1} o b o reparam, in reduced coordinates
  Jet2Map source_change;    // Theta
  Jet1 boundary_reparam;    // the parameter change applied to b
  Mat3 rotation;            // R
  double residual = 0.0;    // max |coefficient| that the solve should have
                            // cancelled (reported, and checked < 1e-10)
};

// Full reduction: adapt, straighten the edge, rotate the target, and solve
// degree-by-degree (total degrees 1..4) for the source diffeomorphism that
// produces the canonical sparsity pattern; then transport and reparametrize
// the boundary and read off its coefficients.
ReductionResult reduce_to_normal_form(const SurfaceGerm& f,
                                      const PlaneCurve& b);

struct EdgeInvariants {
  double kappa_s = 0.0;   // singular curvature        (= a20)
  double kappa_nu = 0.0;  // limiting normal curvature (= b20)
  double kappa_c = 0.0;   // cuspidal curvature        (= b03)
  double kappa_t = 0.0;   // cusp-directional torsion  (= b12)
};

EdgeInvariants edge_invariants(const NormalFormData& nf);

// Degree>=4 tail coefficients of the canonical form other than the one that
// matters at this truncation depth (third component's v^4 coefficient,
// carried inside NormalFormData).  Used to synthesize test representatives.
struct NormalFormTail {
  double h1 = 0.0;  // u^4 in the second component
  double h2 = 0.0;  // u^4 in the third component
  double h3 = 0.0;  // u^2 v^2 in the third component
  double h4 = 0.0;  // u v^3 in the third component
};

// Polynomial representative of the canonical form (exact read-back germ).
SurfaceGerm synthesize_surface(const NormalFormData& nf,
                               const NormalFormTail& tail = {},
                               int order = kDefaultOrder);

// The boundary germ belonging to nf, in canonical coordinates:
// (eps t, c1 t + c2/2 t^2 + c3/6 t^3) or (d2/2 t^2 + d3/6 t^3 + d4/24 t^4,
// eps t).
PlaneCurve synthesize_boundary(const NormalFormData& nf,
                               int order = kDefaultOrder);

}  // namespace cuspedge
