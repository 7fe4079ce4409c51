#include <cmath>
#include <random>

#include <doctest.h>

#include "cuspedge/curves.hpp"

using namespace cuspedge;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

Jet1 poly(std::initializer_list<double> coeffs, int order = 6) {
  Jet1 a(order);
  int k = 0;
  for (double c : coeffs) a.set(k++, c);
  return a;
}

// (t^2/2, t^3/6, t^4/24) and close variants appear throughout.
CurveGerm standard_cusp(double c2 = 0.5, double c3 = 1.0 / 6.0,
                        double c4 = 1.0 / 24.0) {
  return make_curve_germ(poly({0, 0, c2}), poly({0, 0, 0, c3}),
                         poly({0, 0, 0, 0, c4}));
}

CurveGerm random_type23(std::mt19937_64& rng, int order = 6) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Jet1Vec3 x;
    for (int i = 0; i < 3; ++i) {
      x[i] = Jet1(order);
      for (int k = 2; k <= order; ++k) x[i].set(k, u(rng));
    }
    const CurveGerm g{ x };
    const Vec3 d2 = curve_deriv0(g, 2), d3 = curve_deriv0(g, 3);
    if (d2.norm() > 0.3 && d2.cross(d3).norm() > 0.3 * d2.norm()) return g;
  }
}

// g composed with a polynomial reparametrization phi (phi(0) = 0).
CurveGerm reparametrized(const CurveGerm& g, const Jet1& phi) {
  return CurveGerm{ { jet_compose(g.x[0], phi), jet_compose(g.x[1], phi),
                      jet_compose(g.x[2], phi) } };
}

CurveGerm rotated(const CurveGerm& g, const Mat3& r) {
  Jet1Vec3 y;
  for (int i = 0; i < 3; ++i) {
    y[i] = r(i, 0) * g.x[0] + r(i, 1) * g.x[1] + r(i, 2) * g.x[2];
  }
  return CurveGerm{ y };
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec3 axis = Vec3(u(rng), u(rng), u(rng)).normalized();
  return Eigen::AngleAxisd(1.5 * u(rng), axis).toRotationMatrix();
}

}  // namespace

TEST_SUITE("curves") {

TEST_CASE("classification") {
  CHECK(classify_curve(make_curve_germ(poly({0, 1}), poly({0}), poly({0}))) ==
        CurveClass::Regular);
  CHECK(classify_curve(standard_cusp()) == CurveClass::Type23);
  CHECK(classify_curve(make_curve_germ(poly({0, 0, 1}), poly({0}),
                                       poly({0}))) == CurveClass::AType);
  CHECK(classify_curve(make_curve_germ(poly({0, 0, 0, 1}), poly({0}),
                                       poly({0}))) == CurveClass::Degenerate);
  // Order 2 cannot separate AType from Type23.
  CHECK_THROWS_AS((void)classify_curve(make_curve_germ(
                      Jet1::constant(0.0, 2), Jet1::constant(0.0, 2),
                      poly({0, 0, 1}, 2))),
                  const HypothesisFailed&);
}

TEST_CASE("cuspidal curvature frozen values") {
  CHECK(cuspidal_curvature(standard_cusp()) == doctest::Approx(1.0).epsilon(1e-13));
  // (t^2, t^3, 0): |(2,0,0)x(0,6,0)| / 2^{5/2} = 12/(4 sqrt 2) = 3/sqrt(2).
  const CurveGerm g =
      make_curve_germ(poly({0, 0, 1}), poly({0, 0, 0, 1}), poly({0}));
  CHECK(cuspidal_curvature(g) ==
        doctest::Approx(3.0 / kSqrt2).epsilon(1e-13));
  const CurveGerm flat =
      make_curve_germ(poly({0, 0, 1}), poly({0}), poly({0}));
  CHECK(cuspidal_curvature(flat) == doctest::Approx(0.0));

  const CurveGerm regular =
      make_curve_germ(poly({0, 1}), poly({0}), poly({0}));
  CHECK_THROWS_AS((void)cuspidal_curvature(regular), const HypothesisFailed&);
}

TEST_CASE("cuspidal torsion frozen values") {
  CHECK(cuspidal_torsion(standard_cusp()) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(cuspidal_torsion(standard_cusp(0.5, 1.0 / 6.0, 0.0)) ==
        doctest::Approx(0.0));
  const CurveGerm planar =
      make_curve_germ(poly({0, 0, 1}), poly({0, 0, 0, 1}), poly({0}));
  CHECK(cuspidal_torsion(planar) == doctest::Approx(0.0));
  // Not (2,3)-type: second and third derivatives parallel.
  const CurveGerm flat =
      make_curve_germ(poly({0, 0, 1}), poly({0}), poly({0}));
  CHECK_THROWS_AS((void)cuspidal_torsion(flat), const HypothesisFailed&);
}

TEST_CASE("sigma frozen values") {
  CHECK(sigma_sing(standard_cusp()) == doctest::Approx(0.0));
  // (t^2/2, t^3/6 + t^4/24, 0): fourth derivative aligned with the third.
  const CurveGerm g = make_curve_germ(
      poly({0, 0, 0.5}), poly({0, 0, 0, 1.0 / 6.0, 1.0 / 24.0}), poly({0}));
  CHECK(sigma_sing(g) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("parameter invariance of the three singular invariants") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const CurveGerm g = random_type23(rng);
    Jet1 phi(6);
    phi.set(1, 0.4 + 1.2 * std::abs(u(rng)));  // orientation-preserving
    for (int k = 2; k <= 6; ++k) phi.set(k, 0.5 * u(rng));
    const CurveGerm h = reparametrized(g, phi);
    CHECK(cuspidal_curvature(h) ==
          doctest::Approx(cuspidal_curvature(g)).epsilon(1e-8));
    CHECK(cuspidal_torsion(h) ==
          doctest::Approx(cuspidal_torsion(g)).epsilon(1e-8));
    CHECK(sigma_sing(h) == doctest::Approx(sigma_sing(g)).epsilon(1e-8));

    // Reversing the orientation flips the sign of the torsion-like pair and
    // leaves the curvature alone.
    Jet1 rev = phi;
    rev.set(1, -phi.get(1));
    const CurveGerm hr = reparametrized(g, rev);
    CHECK(cuspidal_curvature(hr) ==
          doctest::Approx(cuspidal_curvature(g)).epsilon(1e-8));
    CHECK(cuspidal_torsion(hr) ==
          doctest::Approx(-cuspidal_torsion(g)).epsilon(1e-8));
    CHECK(sigma_sing(hr) == doctest::Approx(-sigma_sing(g)).epsilon(1e-8));
  }
}

TEST_CASE("isometry invariance") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    const CurveGerm g = random_type23(rng);
    const CurveGerm h = rotated(g, random_rotation(rng));
    CHECK(cuspidal_curvature(h) ==
          doctest::Approx(cuspidal_curvature(g)).epsilon(1e-10));
    CHECK(cuspidal_torsion(h) ==
          doctest::Approx(cuspidal_torsion(g)).epsilon(1e-10));
    CHECK(sigma_sing(h) == doctest::Approx(sigma_sing(g)).epsilon(1e-10));

    // A reflection flips tau_sing only.
    Mat3 refl = Mat3::Identity();
    refl(2, 2) = -1.0;
    const CurveGerm hm = rotated(g, refl);
    CHECK(cuspidal_curvature(hm) ==
          doctest::Approx(cuspidal_curvature(g)).epsilon(1e-10));
    CHECK(cuspidal_torsion(hm) ==
          doctest::Approx(-cuspidal_torsion(g)).epsilon(1e-10));
    CHECK(sigma_sing(hm) == doctest::Approx(sigma_sing(g)).epsilon(1e-10));
  }
}

TEST_CASE("kappa_sing nonzero exactly on (2,3)-type") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const CurveGerm g = random_type23(rng);
    CHECK(classify_curve(g) == CurveClass::Type23);
    CHECK(cuspidal_curvature(g) > 0.0);
  }
  const CurveGerm flat =
      make_curve_germ(poly({0, 0, 1, 0.3}), poly({0, 0, 2, 0.6}), poly({0}));
  CHECK(classify_curve(flat) == CurveClass::AType);
  CHECK(cuspidal_curvature(flat) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("half-arclength series") {
  // (t^2, 0, 0): |gamma'| = 2|t|, s_g = t^2, series exactly t.
  const CurveGerm a =
      make_curve_germ(poly({0, 0, 1}), poly({0}), poly({0}));
  const Jet1 ha = half_arclength_series(a);
  CHECK(jet_dist(ha, Jet1::variable(ha.order())) < 1e-13);

  CHECK(half_arclength_series(standard_cusp(0.5, 0.0, 0.0)).get(1) ==
        doctest::Approx(1.0 / kSqrt2).epsilon(1e-13));
  CHECK(half_arclength_series(standard_cusp(0.5, 1.0 / 6.0, 0.0)).get(1) ==
        doctest::Approx(1.0 / kSqrt2).epsilon(1e-13));
}

TEST_CASE("kappa series frozen leading terms") {
  // sqrt(s_g) kappa for (t^2/2, t^3/6 + t^4/12, 0) expands to
  // sqrt(2)(96 + 128 t - 33 t^2)/384.
  const CurveGerm g = make_curve_germ(
      poly({0, 0, 0.5}), poly({0, 0, 0, 1.0 / 6.0, 1.0 / 12.0}), poly({0}));
  const Jet1 F = cusp_kappa_series(g);
  CHECK(F.get(0) == doctest::Approx(kSqrt2 / 4.0).epsilon(1e-12));
  CHECK(F.get(1) == doctest::Approx(kSqrt2 / 3.0).epsilon(1e-12));
  CHECK(F.get(2) == doctest::Approx(-33.0 * kSqrt2 / 384.0).epsilon(1e-10));

  CHECK(kappa_sing_prime(g) == doctest::Approx(kSqrt2 / 3.0).epsilon(1e-12));
  // Even expansion: derivative vanishes.
  CHECK(kappa_sing_prime(standard_cusp(0.5, 1.0 / 6.0, 0.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // The quantity follows the curve point, so a reparametrization scales the
  // derivative by phi'(0); it is pinned only in the half-arclength-normalized
  // parameter.
  Jet1 phi(6);
  phi.set(1, 2.0);
  phi.set(2, 1.0);
  CHECK(kappa_sing_prime(reparametrized(g, phi)) ==
        doctest::Approx(2.0 * kSqrt2 / 3.0).epsilon(1e-10));
}

TEST_CASE("tau series frozen leading terms") {
  const Jet1 G = cusp_tau_series(standard_cusp());
  CHECK(G.get(0) == doctest::Approx(kSqrt2 / 3.0).epsilon(1e-12));
  CHECK(G.get(1) == doctest::Approx(0.0).epsilon(1e-12));

  // Adding t^5/60 to the third component gives series sqrt(2)(2 + 3t)/6.
  const CurveGerm g = make_curve_germ(
      poly({0, 0, 0.5}), poly({0, 0, 0, 1.0 / 6.0}),
      poly({0, 0, 0, 0, 1.0 / 24.0, 1.0 / 60.0}));
  const Jet1 G2 = cusp_tau_series(g);
  CHECK(G2.get(0) == doctest::Approx(kSqrt2 / 3.0).epsilon(1e-12));
  CHECK(G2.get(1) == doctest::Approx(kSqrt2 / 2.0).epsilon(1e-11));
}

TEST_CASE("extrapolated limits at the standard examples") {
  CHECK(limit_kappa(standard_cusp(0.5, 1.0 / 6.0, 0.0)) ==
        doctest::Approx(1.0 / (2.0 * kSqrt2)).epsilon(1e-6));
  const CurveGerm sharp =
      make_curve_germ(poly({0, 0, 1}), poly({0, 0, 0, 1}), poly({0}));
  CHECK(limit_kappa(sharp) == doctest::Approx(0.75).epsilon(1e-6));
  // Doubling the germ scales the limit by 1/sqrt(2).
  const CurveGerm doubled = make_curve_germ(
      2.0 * sharp.x[0], 2.0 * sharp.x[1], 2.0 * sharp.x[2]);
  CHECK(limit_kappa(doubled) == doctest::Approx(0.75 / kSqrt2).epsilon(1e-6));

  CHECK(limit_tau(standard_cusp()) ==
        doctest::Approx(kSqrt2 / 3.0).epsilon(1e-6));
  CHECK(limit_tau(standard_cusp(0.5, 1.0 / 6.0, 0.0)) ==
        doctest::Approx(0.0).epsilon(1e-6));
  CHECK(limit_tau(standard_cusp(0.5, 1.0 / 6.0, -1.0 / 24.0)) ==
        doctest::Approx(-kSqrt2 / 3.0).epsilon(1e-6));
}

TEST_CASE("limits agree with the closed invariants on random germs") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 8; ++trial) {
    const CurveGerm g = random_type23(rng);
    CHECK(limit_kappa(g) ==
          doctest::Approx(cuspidal_curvature(g) / (2.0 * kSqrt2))
              .epsilon(1e-4));
    CHECK(std::abs(limit_tau(g) -
                   (2.0 / (3.0 * kSqrt2)) * cuspidal_torsion(g)) < 1e-4);
  }
}

TEST_CASE("normal form read-off and idempotence") {
  const CurveNormalForm nf = curve_normal_form(standard_cusp(), 4);
  REQUIRE(nf.gamma2.size() >= 2);
  REQUIRE(nf.gamma3.size() >= 1);
  CHECK(nf.gamma2[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(nf.gamma2[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(nf.gamma3[0] == doctest::Approx(1.0).epsilon(1e-10));

  // Running the reduction on its own output changes nothing.
  const CurveNormalForm again = curve_normal_form(nf.curve, 4);
  CHECK(again.gamma2[0] == doctest::Approx(nf.gamma2[0]).epsilon(1e-10));
  CHECK(again.gamma2[1] == doctest::Approx(nf.gamma2[1]).epsilon(1e-10));
  CHECK(again.gamma3[0] == doctest::Approx(nf.gamma3[0]).epsilon(1e-10));

  // The reduced representative has the promised shape.
  const Jet1& first = nf.curve.x[0];
  CHECK(first.get(2) == doctest::Approx(0.5).epsilon(1e-12));
  for (int k = 3; k <= 4; ++k) CHECK(std::abs(first.get(k)) < 1e-10);
  CHECK(std::abs(nf.curve.x[1].get(2)) < 1e-12);
  CHECK(std::abs(nf.curve.x[2].get(2)) < 1e-12);
  CHECK(std::abs(nf.curve.x[2].get(3)) < 1e-12);
}

TEST_CASE("normal form is rotation invariant") {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const CurveGerm g = standard_cusp();
    const CurveNormalForm base = curve_normal_form(g, 4);
    const CurveNormalForm rot =
        curve_normal_form(rotated(g, random_rotation(rng)), 4);
    CHECK(rot.gamma2[0] == doctest::Approx(base.gamma2[0]).epsilon(1e-8));
    CHECK(rot.gamma2[1] ==
          doctest::Approx(base.gamma2[1]).epsilon(1e-8));
    CHECK(rot.gamma3[0] == doctest::Approx(base.gamma3[0]).epsilon(1e-8));
  }
}

TEST_CASE("normal form of a planar germ") {
  // (t^2, t^3, 0): kappa_sing = 3/sqrt(2) = gamma23 under the pinning,
  // tau_sing = sigma_sing = 0 force gamma34 = gamma24 = 0.
  const CurveGerm g =
      make_curve_germ(poly({0, 0, 1}), poly({0, 0, 0, 1}), poly({0}));
  const CurveNormalForm nf = curve_normal_form(g, 4);
  CHECK(nf.gamma2[0] == doctest::Approx(3.0 / kSqrt2).epsilon(1e-10));
  CHECK(nf.gamma2[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(nf.gamma3[0] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("normal form coefficients reproduce the defining invariants") {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const CurveGerm g = random_type23(rng);
    const CurveNormalForm nf = curve_normal_form(g, 4);
    const double g23 = nf.gamma2[0], g24 = nf.gamma2[1], g34 = nf.gamma3[0];
    CHECK(g23 > 0.0);
    CHECK(cuspidal_curvature(g) == doctest::Approx(g23).epsilon(1e-8));
    CHECK(cuspidal_torsion(g) == doctest::Approx(g34 / g23).epsilon(1e-7));
    CHECK(sigma_sing(g) == doctest::Approx(g23 * g24).epsilon(1e-7));
    CHECK(kappa_sing_prime(nf.curve) ==
          doctest::Approx(kSqrt2 * g24 / 6.0).epsilon(1e-7));
  }
}

TEST_CASE("reconstruction: alpha 1, beta 0") {
  const ReconstructionResult r = reconstruct_curve(
      [](double) { return 1.0; }, [](double) { return 0.0; }, -0.5, 0.5,
      5000);
  REQUIRE(r.t.size() == r.gamma.size());
  REQUIRE(r.t.size() == r.frame.size());
  CHECK(r.max_ortho_drift < 1e-8);

  const double h = r.t[1] - r.t[0];
  // Locate t = 0 and check the anchoring.
  int i0 = -1;
  for (size_t i = 0; i < r.t.size(); ++i) {
    if (std::abs(r.t[i]) < h / 4) i0 = static_cast<int>(i);
  }
  REQUIRE(i0 >= 0);
  CHECK(r.gamma[i0].norm() < 1e-14);
  CHECK((r.frame[i0] - Mat3::Identity()).norm() < 1e-14);

  for (const Mat3& a : r.frame) {
    CHECK(a.determinant() > 0.0);
    CHECK((a.transpose() * a - Mat3::Identity()).cwiseAbs().maxCoeff() <
          1e-8);
  }

  // Planar: beta = 0 keeps the curve in the z = 0 plane.
  double max_z = 0.0;
  for (const Vec3& p : r.gamma) max_z = std::max(max_z, std::abs(p.z()));
  CHECK(max_z < 1e-10);

  // |gamma'(t)| = 2|t| and |t| kappa(t) = alpha, re-measured on the grid.
  auto at = [&](int i) { return r.gamma[i]; };
  for (int i = 200; i + 200 < static_cast<int>(r.t.size()); i += 450) {
    const double t = r.t[i];
    if (std::abs(t) < 0.05) continue;
    const Vec3 d1 = (at(i + 1) - at(i - 1)) / (2 * h);
    const Vec3 d2 = (at(i + 1) - 2 * at(i) + at(i - 1)) / (h * h);
    CHECK(d1.norm() == doctest::Approx(2.0 * std::abs(t)).epsilon(1e-6));
    const double kappa = d1.cross(d2).norm() / std::pow(d1.norm(), 3.0);
    CHECK(std::abs(t) * kappa == doctest::Approx(1.0).epsilon(1e-5));
  }
}

TEST_CASE("reconstruction: constant alpha stays planar") {
  const ReconstructionResult r = reconstruct_curve(
      [](double) { return 0.7; }, [](double) { return 0.0; }, -0.4, 0.4,
      2000);
  double max_z = 0.0;
  for (const Vec3& p : r.gamma) max_z = std::max(max_z, std::abs(p.z()));
  CHECK(max_z < 1e-10);
}

TEST_CASE("reconstruction: alpha 1, beta 1 re-measured") {
  const ReconstructionResult r = reconstruct_curve(
      [](double) { return 1.0; }, [](double) { return 1.0; }, -0.4, 0.4,
      8000);
  CHECK(r.max_ortho_drift < 1e-8);
  const double h = r.t[1] - r.t[0];
  auto at = [&](int i) { return r.gamma[i]; };
  // Five-point stencils give the third derivative for tau.
  for (int i = 400; i + 400 < static_cast<int>(r.t.size()); i += 700) {
    const double t = r.t[i];
    if (std::abs(t) < 0.08) continue;
    const Vec3 d1 = (at(i - 2) - 8 * at(i - 1) + 8 * at(i + 1) - at(i + 2)) /
                    (12 * h);
    const Vec3 d2 = (-at(i - 2) + 16 * at(i - 1) - 30 * at(i) +
                     16 * at(i + 1) - at(i + 2)) /
                    (12 * h * h);
    const Vec3 d3 =
        (-at(i - 2) + 2 * at(i - 1) - 2 * at(i + 1) + at(i + 2)) /
        (2 * h * h * h);
    const double kappa = d1.cross(d2).norm() / std::pow(d1.norm(), 3.0);
    const double tau =
        d1.cross(d2).dot(d3) / d1.cross(d2).squaredNorm();
    CHECK(std::abs(t) * kappa == doctest::Approx(1.0).epsilon(1e-4));
    const double sgn = t > 0 ? 1.0 : -1.0;
    CHECK(sgn * std::abs(t) * tau == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("reconstruction rejects invalid inputs") {
  CHECK_THROWS_AS((void)reconstruct_curve([](double) { return -1.0; },
                                          [](double) { return 0.0; }, -0.1,
                                          0.1, 100),
                  const HypothesisFailed&);
  CHECK_THROWS_AS((void)reconstruct_curve([](double) { return 1.0; },
                                          [](double) { return 0.0; }, 0.2,
                                          0.1, 100),
                  const Error&);
}

}  // TEST_SUITE
