#pragma once

// Invariants of the boundary curve of a cuspidal-edge germ: the transverse /
// tangent dichotomy, closed forms for the curvature data of the boundary
// image, the approaching ratio, and the boundary-edge angle.  Closed forms
// are the independently re-derived ones (see README for the convention
// table); the numeric routes recompute everything through the oracle or
// through exact jets and share no formulas with them.

#include "cuspedge/oracle.hpp"
#include "cuspedge/surface.hpp"

namespace cuspedge {

enum class BoundaryKind { Transverse, Tangent };

const char* to_string(BoundaryKind c);

struct BoundaryClass {
  BoundaryKind kind = BoundaryKind::Transverse;
  // Tangent ratio of the edge image against the boundary image,
  // edge'(0) = l * bhat'(0).  Zero in the tangent case.
  double l = 0.0;

  int case_index() const {
    return kind == BoundaryKind::Transverse ? 1 : 2;
  }
};

// Transverse iff the boundary tangent avoids the kernel of df_0, detected
// as (f o b)'(0) != 0.  Requires adapted f and a regular boundary curve.
BoundaryClass classify_boundary(const SurfaceGerm& f, const PlaneCurve& b,
                                double tol = kTauZero);

// Transverse-case invariants of the boundary image bhat = f o b at t = 0.
// Primed fields are derivatives in the canonical edge parameter u (u = eps t
// along the boundary).  When the curvature at 0 vanishes (b20 and c1^2+a20
// both zero) the Frenet frame does not exist there, and kappa_prime and tau
// come back as quiet NaN while every other field stays valid.
struct Case1Report {
  double kappa = 0.0;           // curvature of bhat
  double kappa_prime = 0.0;     // d/du of curvature
  double tau = 0.0;             // torsion
  double kappa_nb = 0.0;        // normal curvature
  double kappa_nb_prime = 0.0;
  double kappa_gb = 0.0;        // geodesic curvature
  double kappa_gb_prime = 0.0;
  double alpha = 0.0;           // approaching ratio
};

// Which set of closed forms to evaluate.  Verified is the re-derived set the
// numeric routes confirm; Printed keeps the variants as they commonly appear
// typeset: primes taken as d/dt along the boundary parameter, the opposite
// geodesic orientation, and an alternate normalization of the tangent-case
// torsion.  The README table states the field-by-field relation.
enum class FormulaVariant { Verified, Printed };

// Closed forms in the canonical coefficients.
Case1Report case1_closed(const NormalFormData& nf,
                         FormulaVariant variant = FormulaVariant::Verified);

// Same quantities by finite differences on a synthesized representative,
// with the exact-jet unit normal along the boundary; alpha through the jet
// route.  Shares no formulas with case1_closed.
Case1Report case1_numeric(const NormalFormData& nf,
                          const NormalFormTail& tail = {});

// Tangent-case invariants of the (singular) boundary image.
struct Case2Report {
  double kappa_sing = 0.0;
  double tau_sing = 0.0;
  double beta = 0.0;         // tangent-normalized reading (= d2 canonically)
  double beta_cosine = 0.0;  // plain cosine of the same pair of directions
};

Case2Report case2_closed(const NormalFormData& nf,
                         FormulaVariant variant = FormulaVariant::Verified);

// Exact-jet route: pushforward the boundary and apply the curve module's
// defining formulas; beta through angle_beta on the synthesized germ.
Case2Report case2_numeric(const NormalFormData& nf,
                          const NormalFormTail& tail = {});

// Approaching ratio of a transverse boundary: second-order separation rate
// of the boundary image from the edge image, measured against the normal at
// the origin.  Computed as
//
//   alpha^2 = |det(edge', edge'' - (|edge'|/|bhat'|)^2 bhat'', nu0)| / |edge'|^3
//
// with all derivatives at 0.  The speed normalization and the positive
// coefficient on the bhat'' column make the value independent of how either
// curve is parametrized (including flips).  `reparam_s`, when given,
// reparametrizes the boundary before anything else runs - analytically a
// no-op, kept as an explicit probe knob.
double approaching_ratio(const SurfaceGerm& f, const PlaneCurve& b,
                         const Jet1* reparam_s = nullptr);

// Angle between a tangent boundary and the edge: the component of the
// boundary image's second derivative along the canonical edge tangent,
// normalized by the size of the transverse component.  Equals d2 on
// canonical input, for either boundary side.  Evaluated in canonical
// coordinates (the reduction runs internally), which pins the edge
// direction and makes the value parametrization-independent.
double angle_beta(const SurfaceGerm& f, const PlaneCurve& b);

}  // namespace cuspedge
