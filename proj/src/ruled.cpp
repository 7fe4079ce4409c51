#include "cuspedge/ruled.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include <Eigen/SVD>

namespace cuspedge {

// ---------------------------------------------------------------------------
// ScalarFn

ScalarFn ScalarFn::poly(std::vector<double> coeffs) {
  ScalarFn f;
  f.poly_ = true;
  f.coeffs_ = std::move(coeffs);
  return f;
}

ScalarFn ScalarFn::samples(std::vector<double> ts, std::vector<double> values) {
  if (ts.size() != values.size() || ts.size() < 2) {
    throw HypothesisFailed("ScalarFn::samples: need matching arrays of >= 2 points");
  }
  for (size_t i = 0; i + 1 < ts.size(); ++i) {
    if (!(ts[i] < ts[i + 1])) {
      throw HypothesisFailed("ScalarFn::samples: abscissae must increase strictly");
    }
  }
  ScalarFn f;
  f.poly_ = false;
  f.ts_ = std::move(ts);
  f.vals_ = std::move(values);

  // Natural cubic spline: tridiagonal solve for the second derivatives.
  const int n = static_cast<int>(f.ts_.size());
  f.m_.assign(n, 0.0);
  if (n > 2) {
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) {
      const double hl = f.ts_[i] - f.ts_[i - 1];
      const double hr = f.ts_[i + 1] - f.ts_[i];
      diag[i] = 2.0 * (hl + hr);
      upper[i] = hr;
      rhs[i] = 6.0 * ((f.vals_[i + 1] - f.vals_[i]) / hr -
                      (f.vals_[i] - f.vals_[i - 1]) / hl);
    }
    for (int i = 2; i + 1 < n; ++i) {
      const double hl = f.ts_[i] - f.ts_[i - 1];  // sub-diagonal entry
      const double w = hl / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (int i = n - 2; i >= 1; --i) {
      f.m_[i] = (rhs[i] - upper[i] * f.m_[i + 1]) / diag[i];
    }
  }
  return f;
}

namespace {

// Index of the spline piece containing t, clamped so out-of-range arguments
// extrapolate with the end cubics.
int find_piece(const std::vector<double>& ts, double t) {
  const int n = static_cast<int>(ts.size());
  int i = static_cast<int>(std::upper_bound(ts.begin(), ts.end(), t) -
                           ts.begin()) - 1;
  return std::clamp(i, 0, n - 2);
}

double falling(int j, int k) {  // j * (j-1) * ... * (j-k+1)
  double p = 1.0;
  for (int m = 0; m < k; ++m) p *= j - m;
  return p;
}

double binom(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

double ScalarFn::operator()(double t) const { return deriv(t, 0); }

double ScalarFn::deriv(double t, int k) const {
  if (poly_) {
    double acc = 0.0;
    for (int j = static_cast<int>(coeffs_.size()) - 1; j >= k; --j) {
      acc = acc * t + coeffs_[j] * falling(j, k);
    }
    return acc;
  }
  const int i = find_piece(ts_, t);
  const double h = ts_[i + 1] - ts_[i];
  const double A = (ts_[i + 1] - t) / h;
  const double B = (t - ts_[i]) / h;
  switch (k) {
    case 0:
      return A * vals_[i] + B * vals_[i + 1] +
             ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h /
                 6.0;
    case 1:
      return (vals_[i + 1] - vals_[i]) / h +
             ((1.0 - 3.0 * A * A) * m_[i] + (3.0 * B * B - 1.0) * m_[i + 1]) *
                 h / 6.0;
    case 2:
      return A * m_[i] + B * m_[i + 1];
    case 3:
      return (m_[i + 1] - m_[i]) / h;
    default:
      return 0.0;  // the interpolant is piecewise cubic
  }
}

Jet1 ScalarFn::local_jet(double t0, int order) const {
  Jet1 jet(order);
  double fact = 1.0;
  for (int m = 0; m <= order; ++m) {
    if (m > 1) fact *= m;
    jet.set(m, deriv(t0, m) / fact);
  }
  return jet;
}

// ---------------------------------------------------------------------------
// Construction

RuledInput make_ruled_input(ScalarFn x, ScalarFn y, ScalarFn kappa_delta,
                            const Vec3& delta0, const Vec3& delta1, double eps,
                            double M, double t_lo, double t_hi) {
  if (std::abs(delta0.norm() - 1.0) > 1e-9 ||
      std::abs(delta1.norm() - 1.0) > 1e-9 ||
      std::abs(delta0.dot(delta1)) > 1e-9) {
    throw HypothesisFailed(
        "ruled input: delta0, delta1 must be orthonormal unit vectors");
  }
  if (!(eps > 0.0) || !(M > eps)) {
    throw HypothesisFailed("ruled input: need 0 < eps < M");
  }
  if (!(t_lo < t_hi) || t_lo > 0.0 || t_hi < 0.0) {
    throw HypothesisFailed("ruled input: need t_lo <= 0 <= t_hi, t_lo < t_hi");
  }
  Vec3 d0 = delta0.normalized();
  Vec3 d1 = (delta1 - delta1.dot(d0) * d0).normalized();
  return RuledInput{std::move(x), std::move(y), std::move(kappa_delta),
                    d0, d1, eps, M, t_lo, t_hi};
}

namespace {

struct FrameState {
  Vec3 d, w, g;  // delta, delta', gamma
};

FrameState frame_rhs(const RuledInput& in, const ScalarFn* z_fn, double t,
                     const FrameState& s) {
  FrameState r;
  r.d = s.w;
  r.w = -s.d + in.kappa_delta(t) * s.d.cross(s.w);
  r.g = in.x(t) * s.d + in.y(t) * s.w;
  if (z_fn != nullptr) r.g += (*z_fn)(t)*s.d.cross(s.w);
  return r;
}

FrameState axpy(const FrameState& a, double c, const FrameState& b) {
  return FrameState{a.d + c * b.d, a.w + c * b.w, a.g + c * b.g};
}

// How far (delta, delta') has strayed from an orthonormal pair.
double pair_drift(const FrameState& s) {
  return std::max({std::abs(s.d.squaredNorm() - 1.0),
                   std::abs(s.w.squaredNorm() - 1.0), std::abs(s.d.dot(s.w))});
}

// One RK4 step followed by a snap of (delta, delta') onto the nearest
// orthonormal pair (polar decomposition).  Reports the pre-snap drift.
void rk4_step(const RuledInput& in, const ScalarFn* z_fn, double t, double h,
              FrameState& s, double& drift) {
  const FrameState k1 = frame_rhs(in, z_fn, t, s);
  const FrameState k2 = frame_rhs(in, z_fn, t + h / 2, axpy(s, h / 2, k1));
  const FrameState k3 = frame_rhs(in, z_fn, t + h / 2, axpy(s, h / 2, k2));
  const FrameState k4 = frame_rhs(in, z_fn, t + h, axpy(s, h, k3));
  s.d += h / 6.0 * (k1.d + 2.0 * k2.d + 2.0 * k3.d + k4.d);
  s.w += h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
  s.g += h / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g);

  drift = pair_drift(s);
  if (!s.d.allFinite() || !s.w.allFinite() || !s.g.allFinite() ||
      drift > 0.5) {
    throw NumericalFailure(
        "ruled frame integration unstable; increase the step count");
  }

  Eigen::Matrix<double, 3, 2> a;
  a.col(0) = s.d;
  a.col(1) = s.w;
  const Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(
      a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Matrix<double, 3, 2> snapped =
      svd.matrixU().leftCols<2>() * svd.matrixV().transpose();
  s.d = snapped.col(0);
  s.w = snapped.col(1);
}

// Integrates delta alone from 0 to t1 and returns (delta, delta') there.
FrameState frame_at(const RuledInput& in, double t1) {
  FrameState s{in.delta0, in.delta1, Vec3::Zero()};
  if (t1 == 0.0) return s;
  const int steps = std::max(64, static_cast<int>(std::ceil(std::abs(t1) / 5e-5)));
  const double h = t1 / steps;
  double drift = 0.0;
  for (int i = 0; i < steps; ++i) rk4_step(in, nullptr, i * h, h, s, drift);
  return s;
}

// Derivative at `at` of the polynomial through (xs[k], fs[k]); serves as a
// finite difference of stencil-width accuracy on a non-uniform grid.
template <int N>
Vec3 lagrange_deriv(const std::array<double, N>& xs,
                    const std::array<Vec3, N>& fs, double at) {
  Vec3 acc = Vec3::Zero();
  for (int k = 0; k < N; ++k) {
    double denom = 1.0, num = 0.0;
    for (int j = 0; j < N; ++j) {
      if (j == k) continue;
      denom *= xs[k] - xs[j];
      double prod = 1.0;
      for (int m = 0; m < N; ++m) {
        if (m != k && m != j) prod *= at - xs[m];
      }
      num += prod;
    }
    acc += fs[k] * (num / denom);
  }
  return acc;
}

}  // namespace

RuledSurface build_ruled(const RuledInput& in, int steps,
                         const ScalarFn* z_fn) {
  if (steps < 2) throw HypothesisFailed("build_ruled: need at least 2 steps");
  const double h = (in.t_hi - in.t_lo) / steps;

  const auto side_steps = [&](double span) {
    return span > 0.0 ? std::max(1, static_cast<int>(std::lround(span / h)))
                      : 0;
  };
  const int n_plus = side_steps(in.t_hi);
  const int n_minus = side_steps(-in.t_lo);
  const double h_plus = n_plus > 0 ? in.t_hi / n_plus : 0.0;
  const double h_minus = n_minus > 0 ? in.t_lo / n_minus : 0.0;  // negative

  RuledSurface out;
  const int total = n_minus + n_plus + 1;
  out.t.resize(total);
  out.delta.resize(total);
  out.ddelta.resize(total);
  out.gamma.resize(total);

  const auto store = [&](int idx, double t, const FrameState& s) {
    out.t[idx] = t;
    out.delta[idx] = s.d;
    out.ddelta[idx] = s.w;
    out.gamma[idx] = s.g;
  };

  double drift = 0.0;
  FrameState s{in.delta0, in.delta1, Vec3::Zero()};
  store(n_minus, 0.0, s);
  for (int i = 0; i < n_plus; ++i) {
    rk4_step(in, z_fn, i * h_plus, h_plus, s, drift);
    out.max_frame_drift = std::max(out.max_frame_drift, drift);
    store(n_minus + 1 + i, (i + 1) * h_plus, s);
  }
  s = FrameState{in.delta0, in.delta1, Vec3::Zero()};
  for (int i = 0; i < n_minus; ++i) {
    rk4_step(in, z_fn, i * h_minus, h_minus, s, drift);
    out.max_frame_drift = std::max(out.max_frame_drift, drift);
    store(n_minus - 1 - i, (i + 1) * h_minus, s);
  }

  out.strip_regular = true;
  for (double t : out.t) {
    if (std::abs(in.y(t)) <= in.eps) out.strip_regular = false;
  }
  return out;
}

double flatness_defect(const RuledSurface& s) {
  const int n = static_cast<int>(s.t.size());
  if (n < 5) throw HypothesisFailed("flatness_defect: need >= 5 samples");
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const int a = std::clamp(i - 2, 0, n - 5);  // quartic stencil in range
    std::array<double, 5> xs;
    std::array<Vec3, 5> fs;
    for (int k = 0; k < 5; ++k) {
      xs[k] = s.t[a + k];
      fs[k] = s.gamma[a + k];
    }
    const Vec3 dg = lagrange_deriv<5>(xs, fs, s.t[i]);
    worst = std::max(worst, std::abs(dg.dot(s.delta[i].cross(s.ddelta[i]))));
  }
  return worst;
}

bool is_flat(const RuledSurface& s, double tau_flat) {
  return flatness_defect(s) < tau_flat;
}

// ---------------------------------------------------------------------------
// Singular set and births

std::vector<std::pair<double, double>> singular_set(const RuledInput& in,
                                                    int samples) {
  if (samples < 2) throw HypothesisFailed("singular_set: need >= 2 samples");
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < samples; ++i) {
    const double t =
        in.t_lo + (in.t_hi - in.t_lo) * i / static_cast<double>(samples - 1);
    const double v = -in.y(t);
    if (std::abs(v) <= in.M) pts.emplace_back(t, v);
  }
  return pts;
}

BirthReport classify_ruled_point(const RuledInput& in, double t0) {
  BirthReport r;
  r.t0 = t0;
  r.v0 = -in.y(t0);
  r.y_prime = in.y.deriv(t0, 1);
  r.y_second = in.y.deriv(t0, 2);
  r.y_prime_minus_x = r.y_prime - in.x(t0);
  r.kappa_delta_at = in.kappa_delta(t0);
  r.is_cuspidal_edge = std::abs(r.y_prime_minus_x) > kTauZero &&
                       std::abs(r.kappa_delta_at) > kTauZero;
  const double ay = std::abs(in.y(t0));
  r.strip_boundary = std::abs(ay - in.eps) <= 1e-9 * std::max(1.0, in.eps) ||
                     std::abs(ay - in.M) <= 1e-9 * std::max(1.0, in.M);
  return r;
}

namespace {

// Root of y' in [a, b] given y'(a) < 0 < y'(b).
double bisect_dy(const ScalarFn& y, double a, double b) {
  for (int it = 0; it < 80; ++it) {
    const double m = 0.5 * (a + b);
    const double v = y.deriv(m, 1);
    if (v == 0.0) return m;
    (v < 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<BirthReport> find_births(const RuledInput& in, int scan_samples) {
  if (scan_samples < 8) {
    throw HypothesisFailed("find_births: scan grid too coarse");
  }
  const int n = scan_samples;
  std::vector<double> ts(n + 1), dy(n + 1);
  double scale = 0.0;
  for (int i = 0; i <= n; ++i) {
    ts[i] = in.t_lo + (in.t_hi - in.t_lo) * i / static_cast<double>(n);
    dy[i] = in.y.deriv(ts[i], 1);
    scale = std::max(scale, std::abs(dy[i]));
  }
  const double dead = std::max(1e-12, 1e-10 * scale);
  std::vector<int> sgn(n + 1);
  for (int i = 0; i <= n; ++i) {
    sgn[i] = std::abs(dy[i]) <= dead ? 0 : (dy[i] < 0.0 ? -1 : 1);
  }

  struct Root {
    double t0;
    bool plateau;
  };
  std::vector<Root> roots;
  int k = 0;
  while (k <= n) {
    if (sgn[k] == 0) {
      int j = k;
      while (j <= n && sgn[j] == 0) ++j;
      // a zero-run bracketed by descent and ascent is one minimum; for a
      // flat stretch (two or more nodes) the midpoint stands in for the
      // whole plateau, which is never a generic birth
      if (k > 0 && sgn[k - 1] < 0 && j <= n && sgn[j] > 0) {
        roots.push_back({0.5 * (ts[k] + ts[j - 1]), j - k >= 2});
      }
      k = j;
    } else {
      if (k > 0 && sgn[k - 1] < 0 && sgn[k] > 0) {
        roots.push_back({bisect_dy(in.y, ts[k - 1], ts[k]), false});
      }
      ++k;
    }
  }

  std::vector<BirthReport> births;
  const auto append = [&](double t0, bool interior, bool plateau) {
    if (std::abs(in.y(t0)) > in.M) return;
    BirthReport r = classify_ruled_point(in, t0);
    r.interior = interior;
    r.is_generic_birth = interior && !plateau && r.is_cuspidal_edge &&
                         std::abs(r.y_second) > kTauZero;
    births.push_back(r);
  };

  if (sgn[0] > 0) append(in.t_lo, false, false);  // closed-interval minimum
  for (const Root& r : roots) append(r.t0, true, r.plateau);
  if (sgn[n] < 0) append(in.t_hi, false, false);

  std::sort(births.begin(), births.end(),
            [](const BirthReport& a, const BirthReport& b) { return a.t0 < b.t0; });
  return births;
}

// ---------------------------------------------------------------------------
// Local jets

SurfaceGerm local_surface_jet(const RuledInput& in, double t0, double v0,
                              int order) {
  if (order < 3 || order > 16) {
    throw HypothesisFailed("local_surface_jet: order out of range");
  }
  const FrameState base = frame_at(in, t0);

  // Raw derivatives of the data functions at t0.
  const auto derivs = [&](const ScalarFn& f) {
    std::vector<double> d(order + 1);
    double fact = 1.0;
    const Jet1 jet = f.local_jet(t0, order);
    for (int m = 0; m <= order; ++m) {
      if (m > 1) fact *= m;
      d[m] = jet.get(m) * fact;
    }
    return d;
  };
  const std::vector<double> xd = derivs(in.x);
  const std::vector<double> yd = derivs(in.y);
  const std::vector<double> kd = derivs(in.kappa_delta);

  // delta^(k) from repeated differentiation of the sphere ODE, seeded with
  // the integrated frame: d'' = -d + kappa (d x d').
  std::vector<Vec3> d(order + 1);
  d[0] = base.d;
  d[1] = base.w;
  const auto cross_deriv = [&](int m) {  // m-th derivative of d x d'
    Vec3 acc = Vec3::Zero();
    for (int i = 0; i <= m; ++i) {
      acc += binom(m, i) * d[i].cross(d[m - i + 1]);
    }
    return acc;
  };
  for (int kk = 0; kk + 2 <= order; ++kk) {
    Vec3 acc = -d[kk];
    for (int j = 0; j <= kk; ++j) {
      acc += binom(kk, j) * kd[j] * cross_deriv(kk - j);
    }
    d[kk + 2] = acc;
  }

  // gamma^(k) for k >= 1 via gamma' = x delta + y delta' (flat construction).
  std::vector<Vec3> g(order + 1, Vec3::Zero());
  for (int kk = 1; kk <= order; ++kk) {
    for (int j = 0; j <= kk - 1; ++j) {
      g[kk] += binom(kk - 1, j) * (xd[j] * d[kk - 1 - j] + yd[j] * d[kk - j]);
    }
  }

  // F(t0+s, v0+w) - F(t0, v0) = sum_k (gamma^(k) + v0 d^(k)) s^k/k!
  //                            + w sum_k d^(k) s^k/k!
  Jet2 comp[3] = {Jet2(order), Jet2(order), Jet2(order)};
  double fact = 1.0;
  for (int kk = 0; kk <= order; ++kk) {
    if (kk > 1) fact *= kk;
    for (int i = 0; i < 3; ++i) {
      if (kk >= 1) comp[i].set(kk, 0, (g[kk](i) + v0 * d[kk](i)) / fact);
      if (kk + 1 <= order) comp[i].set(kk, 1, d[kk](i) / fact);
    }
  }
  return make_surface_germ(comp[0], comp[1], comp[2]);
}

// ---------------------------------------------------------------------------
// Mesh

RuledMesh mesh_export(const RuledInput& in, int nt, int nv) {
  if (nt < 2 || nv < 2) throw HypothesisFailed("mesh_export: grid too small");
  const RuledSurface s = build_ruled(in, nt - 1);

  RuledMesh mesh;
  mesh.nt = static_cast<int>(s.t.size());
  mesh.nv = nv;
  mesh.vertices.reserve(static_cast<size_t>(mesh.nt) * nv);
  mesh.in_strip.reserve(mesh.vertices.capacity());
  for (int ti = 0; ti < mesh.nt; ++ti) {
    for (int vi = 0; vi < nv; ++vi) {
      const double v = -in.M + 2.0 * in.M * vi / static_cast<double>(nv - 1);
      mesh.vertices.push_back(s.gamma[ti] + v * s.delta[ti]);
      mesh.in_strip.push_back(std::abs(v) <= in.eps + 1e-12);
    }
  }
  for (int ti = 0; ti + 1 < mesh.nt; ++ti) {
    for (int vi = 0; vi + 1 < nv; ++vi) {
      const int a = ti * nv + vi;        // (t, v)
      const int b = a + 1;               // (t, v+1)
      const int c = (ti + 1) * nv + vi;  // (t+1, v)
      const int e = c + 1;               // (t+1, v+1)
      mesh.faces.push_back({a, b, e});
      mesh.faces.push_back({a, e, c});
    }
  }
  for (int ti = 0; ti < mesh.nt; ++ti) {
    const double v = -in.y(s.t[ti]);
    if (std::abs(v) <= in.M) {
      mesh.singular_polyline.push_back(s.gamma[ti] + v * s.delta[ti]);
    }
  }
  return mesh;
}

void write_obj(std::ostream& os, const RuledMesh& mesh) {
  os.precision(17);
  for (const Vec3& p : mesh.vertices) {
    os << "v " << p(0) << ' ' << p(1) << ' ' << p(2) << '\n';
  }
  const auto face_in_strip = [&](const std::array<int, 3>& f) {
    return mesh.in_strip[f[0]] && mesh.in_strip[f[1]] && mesh.in_strip[f[2]];
  };
  for (int pass = 0; pass < 2; ++pass) {
    os << (pass == 0 ? "g strip\n" : "g exterior\n");
    for (const std::array<int, 3>& f : mesh.faces) {
      if (face_in_strip(f) == (pass == 0)) {
        os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
      }
    }
  }
  if (!mesh.singular_polyline.empty()) {
    os << "o singular_set\n";
    const int base = static_cast<int>(mesh.vertices.size());
    for (const Vec3& p : mesh.singular_polyline) {
      os << "v " << p(0) << ' ' << p(1) << ' ' << p(2) << '\n';
    }
    for (size_t i = 0; i + 1 < mesh.singular_polyline.size(); ++i) {
      const int a = base + static_cast<int>(i) + 1;
      os << "l " << a << ' ' << a + 1 << '\n';
    }
  }
}

}  // namespace cuspedge
