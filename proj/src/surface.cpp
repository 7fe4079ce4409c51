#include "cuspedge/surface.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace cuspedge {

SurfaceGerm make_surface_germ(const Jet2& a, const Jet2& b, const Jet2& c) {
  if (a.order() != b.order() || a.order() != c.order()) {
    throw HypothesisFailed("surface germ: components must share one order");
  }
  if (a.order() < 2) {
    throw HypothesisFailed("surface germ: order must be at least 2");
  }
  if (a.get(0, 0) != 0.0 || b.get(0, 0) != 0.0 || c.get(0, 0) != 0.0) {
    throw HypothesisFailed("surface germ: must be based at the origin");
  }
  return SurfaceGerm{{a, b, c}};
}

Vec3 eval_surface(const SurfaceGerm& f, double u, double v) {
  return Vec3(jet_eval(f.x[0], u, v), jet_eval(f.x[1], u, v),
              jet_eval(f.x[2], u, v));
}

SurfFn surface_evaluator(const SurfaceGerm& f) {
  return [f](double u, double v) { return eval_surface(f, u, v); };
}

PlaneCurve make_plane_curve(const Jet1& x, const Jet1& y) {
  if (x.order() != y.order()) {
    throw HypothesisFailed("plane curve: components must share one order");
  }
  if (x.get(0) != 0.0 || y.get(0) != 0.0) {
    throw HypothesisFailed("plane curve: must be based at the origin");
  }
  return PlaneCurve{x, y};
}

CurveGerm pushforward(const SurfaceGerm& f, const PlaneCurve& b) {
  return make_curve_germ(jet_subst_curve(f.x[0], b.x, b.y),
                         jet_subst_curve(f.x[1], b.x, b.y),
                         jet_subst_curve(f.x[2], b.x, b.y));
}

namespace {

Vec3 coeff_vec(const Jet2Vec3& f, int i, int j) {
  return Vec3(f[0].get(i, j), f[1].get(i, j), f[2].get(i, j));
}

Vec3 coeff_vec(const SurfaceGerm& f, int i, int j) {
  return coeff_vec(f.x, i, j);
}

}  // namespace

bool is_adapted(const SurfaceGerm& f, double tol) {
  if (coeff_vec(f, 1, 0).norm() <= tol) return false;
  // f_v divisible by v <=> no pure-u monomials carry a v-derivative,
  // i.e. every coefficient of u^i v^1 vanishes.
  for (int i = 0; i + 1 <= f.order(); ++i) {
    if (coeff_vec(f, i, 1).norm() > tol) return false;
  }
  return true;
}

void require_adapted(const SurfaceGerm& f, double tol) {
  if (!is_adapted(f, tol)) {
    throw NotAdapted("surface germ is not adapted to the edge");
  }
}

Jet2Vec3 unit_normal_jet(const SurfaceGerm& f) {
  require_adapted(f);
  Jet2Vec3 fu, g;
  for (int i = 0; i < 3; ++i) {
    fu[i] = jet_du(f.x[i]);
    g[i] = jet_div_exact_v(jet_dv(f.x[i]), 1);
  }
  const Jet2Vec3 w = jcross(fu, g);
  const Jet2 inv_norm = jet_sqrt_inv(jdot(w, w));
  return {w[0] * inv_norm, w[1] * inv_norm, w[2] * inv_norm};
}

bool is_cuspidal_edge(const SurfaceGerm& f, double tol) {
  require_adapted(f, tol);
  if (f.order() < 3) {
    throw HypothesisFailed("is_cuspidal_edge: needs a 3-jet");
  }
  const Vec3 fu = coeff_vec(f, 1, 0);
  const Vec3 fvv = 2.0 * coeff_vec(f, 0, 2);
  const Vec3 fvvv = 6.0 * coeff_vec(f, 0, 3);
  if (fu.norm() <= tol) return false;
  return std::abs(fu.cross(fvv).dot(fvvv)) > tol;
}

// ---------------------------------------------------------------------------
// Reduction to the canonical polynomial form.

namespace {

Jet2 embed_u(const Jet1& a, int order) {
  Jet2 out(order);
  for (int i = 0; i <= std::min(order, a.order()); ++i) out.set(i, 0, a.get(i));
  return out;
}

Jet2Vec3 lift_surface(const SurfaceGerm& f, int order) {
  return {truncated(f.x[0], order), truncated(f.x[1], order),
          truncated(f.x[2], order)};
}

Jet2Vec3 compose_all(const Jet2Vec3& f, const Jet2Map& m) {
  return {jet_subst(f[0], m.x, m.y), jet_subst(f[1], m.x, m.y),
          jet_subst(f[2], m.x, m.y)};
}

// Unit kernel direction of the rank-one differential at the origin, with a
// pinned sign (positive v-component, positive u-component as tiebreak).
Eigen::Vector2d pinned_kernel(const Jet2Vec3& f) {
  const Vec3 fu = coeff_vec(f, 1, 0);
  const Vec3 fv = coeff_vec(f, 0, 1);
  const double E = fu.squaredNorm(), F = fu.dot(fv), G = fv.squaredNorm();
  const double trace = E + G;
  if (trace <= kTauZero * kTauZero) {
    throw HypothesisFailed("reduce: differential vanishes at the origin");
  }
  // Eigenvalues of the Gram matrix; rank one means the smaller one is
  // negligible against the larger.
  const double disc = std::sqrt(std::max(0.0, (E - G) * (E - G) + 4 * F * F));
  const double lo = 0.5 * (trace - disc), hi = 0.5 * (trace + disc);
  if (lo > 1e-12 * hi) {
    throw HypothesisFailed("reduce: immersive at the origin, no edge");
  }
  Eigen::Vector2d k = (E >= G) ? Eigen::Vector2d(-F, E) : Eigen::Vector2d(G, -F);
  k.normalize();
  if (k[1] < -kTauZero || (std::abs(k[1]) <= kTauZero && k[0] < 0.0)) k = -k;
  return k;
}

// Solve lambda(u, s(u)) = 0 for the singular-set graph v = s(u) by Newton
// iteration on jets; lambda_v(0,0) must not vanish.
Jet1 singular_graph(const Jet2& lambda, int order) {
  const Jet2 lambda_v = jet_dv(lambda);
  if (std::abs(lambda_v.get(0, 0)) <= kTauZero) {
    throw HypothesisFailed("reduce: singular set is not a transverse graph");
  }
  const Jet1 u = Jet1::variable(order);
  Jet1 s = Jet1::constant(0.0, order);
  int sweeps = 1;
  while ((1 << sweeps) < order + 1) ++sweeps;
  for (int it = 0; it <= sweeps; ++it) {
    const Jet1 num = jet_subst_curve(lambda, u, s);
    const Jet1 den = jet_subst_curve(lambda_v, u, s);
    s = s - num * jet_inv(den);
  }
  return s;
}

struct DiffeoCoeffs {
  double p[5] = {0, 0, 0, 0, 0};    // p[k] u^k in the first component
  double r[3][3] = {{0}};           // r[i][j] u^i v^{j+2} in the first
  double psi[3][3] = {{0}};         // psi[i][j] u^i v^{j+1} in the second
};

Jet2Map build_phi(const DiffeoCoeffs& dc, int order) {
  Jet2 x(order), y(order);
  for (int k = 1; k <= 4; ++k) x.set(k, 0, dc.p[k]);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; i + j < 3; ++j) {
      x.set(i, j + 2, dc.r[i][j]);
      y.set(i, j + 1, dc.psi[i][j]);
    }
  }
  return Jet2Map{x, y};
}

struct PatternRow {
  int comp, i, j;
  double target;
};

// Everything of total degree <= 4 that the canonical form pins down.  The
// free slots (a20, a30, b20, b30, b12, b03 and the degree-four tail of the
// second and third components) are absent.
std::vector<PatternRow> pattern_rows(int degree) {
  std::vector<PatternRow> rows;
  for (int i = 0; i <= degree; ++i) {
    const int j = degree - i;
    rows.push_back({0, i, j, (i == 1 && j == 0) ? 1.0 : 0.0});
  }
  switch (degree) {
    case 1:
      rows.push_back({1, 1, 0, 0.0});
      rows.push_back({1, 0, 1, 0.0});
      rows.push_back({2, 1, 0, 0.0});
      rows.push_back({2, 0, 1, 0.0});
      break;
    case 2:
      rows.push_back({1, 1, 1, 0.0});
      rows.push_back({1, 0, 2, 0.5});
      rows.push_back({2, 1, 1, 0.0});
      rows.push_back({2, 0, 2, 0.0});
      break;
    case 3:
      rows.push_back({1, 2, 1, 0.0});
      rows.push_back({1, 1, 2, 0.0});
      rows.push_back({1, 0, 3, 0.0});
      rows.push_back({2, 2, 1, 0.0});
      break;
    case 4:
      rows.push_back({1, 3, 1, 0.0});
      rows.push_back({1, 2, 2, 0.0});
      rows.push_back({1, 1, 3, 0.0});
      rows.push_back({1, 0, 4, 0.0});
      rows.push_back({2, 3, 1, 0.0});
      break;
    default:
      break;
  }
  return rows;
}

// One unknown of the degree-by-degree solve: a pointer into DiffeoCoeffs.
struct Unknown {
  enum Kind { P, R, Psi } kind;
  int a = 0, b = 0;
};

double* slot(DiffeoCoeffs& dc, const Unknown& u) {
  switch (u.kind) {
    case Unknown::P: return &dc.p[u.a];
    case Unknown::R: return &dc.r[u.a][u.b];
    case Unknown::Psi: return &dc.psi[u.a][u.b];
  }
  return nullptr;
}

std::vector<Unknown> level_unknowns(int degree) {
  switch (degree) {
    case 2:
      return {{Unknown::P, 2}, {Unknown::R, 0, 0}};
    case 3:
      return {{Unknown::P, 3},
              {Unknown::R, 1, 0},
              {Unknown::R, 0, 1},
              {Unknown::Psi, 1, 0},
              {Unknown::Psi, 0, 1}};
    case 4:
      return {{Unknown::P, 4},
              {Unknown::R, 2, 0},
              {Unknown::R, 1, 1},
              {Unknown::R, 0, 2},
              {Unknown::Psi, 2, 0},
              {Unknown::Psi, 1, 1},
              {Unknown::Psi, 0, 2}};
    default:
      return {};
  }
}

struct SolveOutcome {
  Jet2Vec3 reduced;   // R * (f o phi), at working order
  Jet2Map phi;
  Mat3 rot;
  double residual;
};

// Target-rotate and solve for the structured diffeomorphism producing the
// canonical sparsity pattern through total degree 4.  `sign` selects the
// orientation of the edge axis (and with it the first and third rotation
// rows) and flips the v-axis in tandem, so both solves are related by an
// orientation-preserving change of source coordinates.
SolveOutcome solve_structured(const Jet2Vec3& f3, double sign, int work_order) {
  const Vec3 fu = coeff_vec(f3, 1, 0);
  const Vec3 fvv = 2.0 * coeff_vec(f3, 0, 2);
  const Vec3 that = fu.normalized();
  const Vec3 mvec = fvv - fvv.dot(that) * that;
  if (mvec.norm() <= kTauZero) {
    throw HypothesisFailed("reduce: f_vv parallel to f_u, no cuspidal edge");
  }
  const Vec3 mhat = mvec.normalized();

  Mat3 rot;
  rot.row(0) = sign * that;
  rot.row(1) = mhat;
  rot.row(2) = sign * that.cross(mhat);

  Jet2Vec3 g;
  for (int i = 0; i < 3; ++i) {
    g[i] = rot(i, 0) * f3[0] + rot(i, 1) * f3[1] + rot(i, 2) * f3[2];
  }

  DiffeoCoeffs dc;
  dc.p[1] = sign / fu.norm();
  // The v-scale carries the same sign so that the fallback solve flips both
  // source axes together: the combined change of coordinates then preserves
  // source orientation, which keeps the recorded coefficient signs
  // independent of the frame the input germ happened to arrive in.
  dc.psi[0][0] = sign / std::sqrt(mvec.norm());

  auto coeffs_at = [&](const DiffeoCoeffs& d, const std::vector<PatternRow>& rows) {
    const Jet2Vec3 h = compose_all(g, build_phi(d, work_order));
    Eigen::VectorXd out(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
      out[k] = h[rows[k].comp].get(rows[k].i, rows[k].j);
    }
    return out;
  };

  for (int degree = 2; degree <= 4; ++degree) {
    const std::vector<PatternRow> rows = pattern_rows(degree);
    const std::vector<Unknown> unknowns = level_unknowns(degree);
    Eigen::VectorXd base = coeffs_at(dc, rows);
    Eigen::VectorXd rhs(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) rhs[k] = rows[k].target - base[k];
    Eigen::MatrixXd a(rows.size(), unknowns.size());
    for (size_t c = 0; c < unknowns.size(); ++c) {
      DiffeoCoeffs probe = dc;
      *slot(probe, unknowns[c]) = 1.0;
      a.col(c) = coeffs_at(probe, rows) - base;
    }
    const Eigen::VectorXd z = a.colPivHouseholderQr().solve(rhs);
    for (size_t c = 0; c < unknowns.size(); ++c) {
      *slot(dc, unknowns[c]) = z[c];
    }
  }

  SolveOutcome out;
  out.phi = build_phi(dc, work_order);
  out.reduced = compose_all(g, out.phi);
  out.rot = rot;
  out.residual = 0.0;
  for (int degree = 1; degree <= 4; ++degree) {
    for (const PatternRow& row : pattern_rows(degree)) {
      const double got = out.reduced[row.comp].get(row.i, row.j);
      out.residual = std::max(out.residual, std::abs(got - row.target));
    }
  }
  return out;
}

}  // namespace

ReductionResult reduce_to_normal_form(const SurfaceGerm& f,
                                      const PlaneCurve& b) {
  if (f.order() < 4) {
    throw HypothesisFailed("reduce: needs at least a 4-jet surface");
  }
  if (b.order() < 4) {
    throw HypothesisFailed("reduce: needs at least a 4-jet boundary");
  }
  const int work = f.order() + 4;
  const Jet2Vec3 f0 = lift_surface(f, work);

  // Step 1: rotate the source so the kernel of the differential is dv.
  const Eigen::Vector2d k = pinned_kernel(f0);
  Jet2Map theta_a = Jet2Map::identity(work);
  theta_a.x = k[1] * Jet2::variable_u(work) + k[0] * Jet2::variable_v(work);
  theta_a.y = -k[0] * Jet2::variable_u(work) + k[1] * Jet2::variable_v(work);
  const Jet2Vec3 f1 = compose_all(f0, theta_a);

  // Step 2: straighten the singular set onto v = 0.  The area density
  // against the normal direction at the origin vanishes exactly there.
  Jet2Vec3 f1u, f1v;
  for (int i = 0; i < 3; ++i) {
    f1u[i] = jet_du(f1[i]);
    f1v[i] = jet_dv(f1[i]);
  }
  const Vec3 fu0 = coeff_vec(f1, 1, 0);
  const Vec3 fvv0 = 2.0 * coeff_vec(f1, 0, 2);
  Vec3 n0 = fu0.cross(fvv0);
  if (n0.norm() <= kTauZero) {
    throw HypothesisFailed("reduce: degenerate edge direction");
  }
  n0.normalize();
  const Jet2Vec3 cr = jcross(f1u, f1v);
  const Jet2 lambda =
      n0[0] * cr[0] + n0[1] * cr[1] + n0[2] * cr[2];
  const Jet1 s_graph = singular_graph(lambda, work);
  Jet2Map theta_b = Jet2Map::identity(work);
  theta_b.y = Jet2::variable_v(work) + embed_u(s_graph, work);
  const Jet2Vec3 f2 = compose_all(f1, theta_b);

  // Step 3: straighten the null direction onto dv, making the germ adapted.
  Jet2Vec3 f2u, f2v;
  for (int i = 0; i < 3; ++i) {
    f2u[i] = jet_du(f2[i]);
    f2v[i] = jet_dv(f2[i]);
  }
  Jet1 num = Jet1::constant(0.0, work - 1);
  Jet1 den = Jet1::constant(0.0, work - 1);
  for (int i = 0; i < 3; ++i) {
    num = num + restrict_v0(f2v[i]) * restrict_v0(f2u[i]);
    den = den + restrict_v0(f2u[i]) * restrict_v0(f2u[i]);
  }
  const Jet1 c_fn = num * jet_inv(den);
  Jet2Map theta_c = Jet2Map::identity(work);
  theta_c.x =
      Jet2::variable_u(work) - embed_u(c_fn, work) * Jet2::variable_v(work);
  const Jet2Vec3 f3 = compose_all(f2, theta_c);

  {
    // The cuspidal-edge test in the adapted coordinates.
    const Vec3 au = coeff_vec(f3, 1, 0);
    const Vec3 avv = 2.0 * coeff_vec(f3, 0, 2);
    const Vec3 avvv = 6.0 * coeff_vec(f3, 0, 3);
    if (au.norm() <= kTauZero ||
        std::abs(au.cross(avv).dot(avvv)) <= kTauZero) {
      throw HypothesisFailed("reduce: not a cuspidal edge");
    }
  }

  // Step 4: rotate the target and solve for the structured diffeomorphism;
  // redo with the opposite edge orientation if the limiting normal
  // curvature came out negative.
  SolveOutcome sol = solve_structured(f3, +1.0, work);
  if (2.0 * sol.reduced[2].get(2, 0) < -kTauZero) {
    sol = solve_structured(f3, -1.0, work);
  }

  ReductionResult res;
  res.rotation = sol.rot;
  res.residual = sol.residual;
  res.source_change =
      map_compose(theta_a, map_compose(theta_b, map_compose(theta_c, sol.phi)));

  NormalFormData data;
  data.a20 = 2.0 * sol.reduced[1].get(2, 0);
  data.a30 = 6.0 * sol.reduced[1].get(3, 0);
  data.b20 = 2.0 * sol.reduced[2].get(2, 0);
  data.b30 = 6.0 * sol.reduced[2].get(3, 0);
  data.b12 = 2.0 * sol.reduced[2].get(1, 2);
  data.b03 = 6.0 * sol.reduced[2].get(0, 3);
  data.h5_00 = sol.reduced[2].get(0, 4);

  // Step 5: transport the boundary and read its coefficients after an
  // orientation-preserving reparametrization.
  const Jet2Map theta_inv = map_inverse(res.source_change);
  const Jet1 bx = truncated(b.x, work);
  const Jet1 by = truncated(b.y, work);
  const Jet1 tbx = jet_subst_curve(theta_inv.x, bx, by);
  const Jet1 tby = jet_subst_curve(theta_inv.y, bx, by);

  const double du = tbx.get(1), dv = tby.get(1);
  if (std::abs(du) <= kTauZero && std::abs(dv) <= kTauZero) {
    throw HypothesisFailed("reduce: boundary curve is singular at 0");
  }

  Jet1 rho;
  if (std::abs(du) > kTauZero) {
    Case1Coeffs cc;
    cc.eps = du > 0.0 ? 1.0 : -1.0;
    rho = jet_compose(jet_invert(tbx), cc.eps * Jet1::variable(work));
    const Jet1 bu = jet_compose(tbx, rho);
    const Jet1 bv = jet_compose(tby, rho);
    cc.c1 = bv.get(1);
    cc.c2 = 2.0 * bv.get(2);
    cc.c3 = 6.0 * bv.get(3);
    for (int i = 2; i <= std::min(4, bu.order()); ++i) {
      res.residual = std::max(res.residual, std::abs(bu.get(i)));
    }
    data.boundary = cc;
    res.boundary = PlaneCurve{truncated(bu, f.order()), truncated(bv, f.order())};
  } else {
    Case2Coeffs cc;
    cc.eps = dv > 0.0 ? 1.0 : -1.0;
    rho = jet_compose(jet_invert(tby), cc.eps * Jet1::variable(work));
    const Jet1 bu = jet_compose(tbx, rho);
    const Jet1 bv = jet_compose(tby, rho);
    cc.d2 = 2.0 * bu.get(2);
    cc.d3 = 6.0 * bu.get(3);
    cc.d4 = 24.0 * bu.get(4);
    res.residual = std::max(res.residual, std::abs(bu.get(1)));
    data.boundary = cc;
    res.boundary = PlaneCurve{truncated(bu, f.order()), truncated(bv, f.order())};
  }
  res.boundary_reparam = truncated(rho, f.order());
  res.data = data;

  res.reduced = SurfaceGerm{{truncated(sol.reduced[0], f.order()),
                             truncated(sol.reduced[1], f.order()),
                             truncated(sol.reduced[2], f.order())}};
  res.source_change.x = truncated(res.source_change.x, f.order());
  res.source_change.y = truncated(res.source_change.y, f.order());
  return res;
}

EdgeInvariants edge_invariants(const NormalFormData& nf) {
  return EdgeInvariants{nf.a20, nf.b20, nf.b03, nf.b12};
}

SurfaceGerm synthesize_surface(const NormalFormData& nf,
                               const NormalFormTail& tail, int order) {
  if (order < 4) {
    throw HypothesisFailed("synthesize_surface: order must be at least 4");
  }
  Jet2 x(order), y(order), z(order);
  x.set(1, 0, 1.0);
  y.set(2, 0, nf.a20 / 2.0);
  y.set(3, 0, nf.a30 / 6.0);
  y.set(0, 2, 0.5);
  y.set(4, 0, tail.h1);
  z.set(2, 0, nf.b20 / 2.0);
  z.set(3, 0, nf.b30 / 6.0);
  z.set(1, 2, nf.b12 / 2.0);
  z.set(0, 3, nf.b03 / 6.0);
  z.set(4, 0, tail.h2);
  z.set(2, 2, tail.h3);
  z.set(1, 3, tail.h4);
  z.set(0, 4, nf.h5_00);
  return SurfaceGerm{{x, y, z}};
}

PlaneCurve synthesize_boundary(const NormalFormData& nf, int order) {
  Jet1 x = Jet1::constant(0.0, order);
  Jet1 y = Jet1::constant(0.0, order);
  if (nf.is_case1()) {
    const Case1Coeffs& c = nf.case1();
    x.set(1, c.eps);
    y.set(1, c.c1);
    y.set(2, c.c2 / 2.0);
    y.set(3, c.c3 / 6.0);
  } else {
    const Case2Coeffs& c = nf.case2();
    x.set(2, c.d2 / 2.0);
    x.set(3, c.d3 / 6.0);
    if (order >= 4) x.set(4, c.d4 / 24.0);
    y.set(1, c.eps);
  }
  return PlaneCurve{x, y};
}

}  // namespace cuspedge
