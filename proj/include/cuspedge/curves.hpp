#pragma once

// Space curve-germs with a singular point at t = 0: classification,
// curvature/torsion substitutes at the singularity, normal form, limits of
// the regular invariants, and reconstruction from prescribed data.

#include <vector>

#include "cuspedge/jets.hpp"
#include "cuspedge/oracle.hpp"

namespace cuspedge {

struct CurveGerm {
  Jet1Vec3 x;

  int order() const { return x[0].order(); }
};

// Validates: shared order >= 2, zero constant terms.
CurveGerm make_curve_germ(const Jet1& a, const Jet1& b, const Jet1& c);

Vec3 curve_deriv0(const CurveGerm& g, int k);  // k-th derivative at t = 0
Vec3 eval_curve(const CurveGerm& g, double t);
CurveFn curve_evaluator(const CurveGerm& g);

enum class CurveClass { Regular, AType, Type23, Degenerate };

const char* to_string(CurveClass c);

CurveClass classify_curve(const CurveGerm& g, double tol = kTauZero);

// |g''(0) x g'''(0)| / |g''(0)|^{5/2}; needs an A-type point.
double cuspidal_curvature(const CurveGerm& g);

// sqrt(|g''(0)|) det(g''(0), g'''(0), g''''(0)) / |g''(0) x g'''(0)|^2;
// needs a (2,3)-type point and order >= 4.
double cuspidal_torsion(const CurveGerm& g);

// The parameter-independent substitute for the derivative of curvature at
// the singularity (an algebraic expression in g'' .. g'''' at 0).
double sigma_sing(const CurveGerm& g);

// Jet of sgn(t) sqrt(|s_g(t)|), the half-arclength coordinate; s_g is the
// signed arclength from 0.
Jet1 half_arclength_series(const CurveGerm& g);

// Jets of the two smooth combinations sqrt(|s_g|) kappa and
// sgn(t) sqrt(|s_g|) tau.  These are exact consequences of the germ's jet.
Jet1 cusp_kappa_series(const CurveGerm& g);
Jet1 cusp_tau_series(const CurveGerm& g);

// d/dt of sqrt(|s_g(t)|) kappa(t) at 0, from the jet expansion.
double kappa_sing_prime(const CurveGerm& g);

struct LimitParams {
  int samples = 5;       // extrapolation ladder depth
  double t_min = 1e-3;   // closest sample to the singularity
  double ratio = 2.0;    // geometric spacing
};

// Numeric limits of sqrt(|s_g|) kappa and sgn(t) sqrt(|s_g|) tau as t -> 0+,
// built on the finite-difference oracle plus Richardson extrapolation.
double limit_kappa(const CurveGerm& g, const LimitParams& p = {});
double limit_tau(const CurveGerm& g, const LimitParams& p = {});

struct CurveNormalForm {
  int degree = 4;
  // gamma2[i] is the (i+3)-rd derivative at 0 of the second component of
  // the reduced curve; gamma3[i] the (i+4)-th derivative of the third.
  std::vector<double> gamma2;
  std::vector<double> gamma3;
  Mat3 rotation;   // the isometry applied to the input
  Jet1 reparam;    // t(s); input composed with it gives the reduced curve
  CurveGerm curve; // the reduced representative (first component s^2/2)
};

// Rotate + reparametrize an A-type germ so the first component is exactly
// s^2/2 through `degree`, the second starts at degree 3 and the third at
// degree 4.  gamma2[0] > 0 for (2,3)-type inputs by the rotation pinning.
CurveNormalForm curve_normal_form(const CurveGerm& g, int degree = 4);

struct ReconstructionResult {
  std::vector<double> t;
  std::vector<Vec3> gamma;
  std::vector<Mat3> frame;   // orthonormal frame A(t), columns (e, n, b)
  double max_ortho_drift = 0.0;  // max over samples of ||A^T A - I||_inf
};

// Integrate A' = 2 A S(alpha, beta), gamma' = 2 t e, A(t0) = frame0 at t=0,
// with S the skew matrix pairing alpha with the (e,n) block and beta with
// the (n,b) block.  Fixed-step RK4 with per-step re-orthonormalization.
ReconstructionResult reconstruct_curve(const RealFn& alpha, const RealFn& beta,
                                       double t_lo, double t_hi, int steps,
                                       const Mat3& frame0 = Mat3::Identity());

}  // namespace cuspedge
