#include "ncg/nullcurve.hpp"

#include <random>

#include "doctest.h"
#include "ncg/cx3.hpp"

using namespace ncg;

namespace {

NullCurveRep seed_line(double c = 1.0) {
  std::array<LaurentPoly, 3> phi;
  phi[0] = LaurentPoly();
  phi[1] = LaurentPoly::constant(cplx(0, c));
  phi[2] = LaurentPoly::constant(cplx(c, 0));
  return NullCurveRep::checked(DomainSpec::disc(), phi, cplx(0, 0), CVec3::Zero());
}

// Complex orthogonal via the Cayley transform of a random antisymmetric S.
CMat3 random_orthogonal(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 0.4);
  CMat3 s = CMat3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      s(i, j) = cplx(g(rng), g(rng));
      s(j, i) = -s(i, j);
    }
  const CMat3 id = CMat3::Identity();
  return (id - s) * (id + s).inverse();
}

GeneralizedTarget sample_rep(const NullCurveRep& rep, int n, double radius) {
  TargetPiece piece;
  piece.label = "samples";
  for (int k = 0; k < n; ++k) {
    const cplx z = std::polar(radius, 2.0 * M_PI * k / n);
    piece.zeta.push_back(z);
    piece.values.push_back(evaluate(rep, z));
    piece.derivs.push_back(rep.derivative(z));
  }
  GeneralizedTarget t;
  t.pieces.push_back(piece);
  return t;
}

}  // namespace

TEST_CASE("weierstrass constructor against hand-computed triples") {
  const LaurentPoly z2 = LaurentPoly::constant(2.0);
  const LaurentPoly w1 = LaurentPoly::constant(1.0);
  NullCurveRep rep =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z2, w1, cplx(0, 0), CVec3::Zero());
  const CVec3 d = rep.derivative(cplx(0.3, 0.1));
  CHECK(std::abs(d(0)) < 1e-15);
  CHECK(std::abs(d(1) - cplx(0, 2)) < 1e-15);
  CHECK(std::abs(d(2) - cplx(2, 0)) < 1e-15);

  const LaurentPoly z1 = LaurentPoly::constant(1.0);
  const LaurentPoly wz = LaurentPoly::monomial(1, 1.0);
  NullCurveRep gauss =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z1, wz, cplx(0, 0), CVec3::Zero());
  const cplx zeta(0.4, -0.2);
  const cplx zz = zeta * zeta;
  CHECK(std::abs(gauss.phi(0).eval(zeta) - 0.5 * (1.0 - zz)) < 1e-15);
  CHECK(std::abs(gauss.phi(1).eval(zeta) - cplx(0, 0.5) * (1.0 + zz)) < 1e-15);
  CHECK(std::abs(gauss.phi(2).eval(zeta) - zeta) < 1e-15);

  CHECK_THROWS_AS(NullCurveRep::from_weierstrass(DomainSpec::disc(), LaurentPoly(), w1,
                                                 cplx(0, 0), CVec3::Zero()),
                  std::invalid_argument);
}

TEST_CASE("invariant checks reject bad triples") {
  std::array<LaurentPoly, 3> bad;
  bad[0] = LaurentPoly::constant(1.0);
  bad[1] = LaurentPoly::constant(1.0);
  bad[2] = LaurentPoly::constant(1.0);
  CHECK_THROWS_AS(
      NullCurveRep::checked(DomainSpec::disc(), bad, cplx(0, 0), CVec3::Zero()),
      std::invalid_argument);

  // (1, i, 0) scaled by zeta^{-1} is null but has a period on the annulus.
  std::array<LaurentPoly, 3> per;
  per[0] = LaurentPoly::monomial(-1, 1.0);
  per[1] = LaurentPoly::monomial(-1, cplx(0, 1));
  per[2] = LaurentPoly();
  CHECK_THROWS_AS(NullCurveRep::checked(DomainSpec::annulus(0.5), per, cplx(0.7, 0),
                                        CVec3::Zero()),
                  std::invalid_argument);

  // Same triple at zeta^{-2} is exact on the annulus but illegal on the disc.
  std::array<LaurentPoly, 3> neg;
  neg[0] = LaurentPoly::monomial(-2, 1.0);
  neg[1] = LaurentPoly::monomial(-2, cplx(0, 1));
  neg[2] = LaurentPoly();
  CHECK_NOTHROW(NullCurveRep::checked(DomainSpec::annulus(0.5), neg, cplx(0.7, 0),
                                      CVec3::Zero()));
  CHECK_THROWS_AS(
      NullCurveRep::checked(DomainSpec::disc(), neg, cplx(0.5, 0), CVec3::Zero()),
      std::invalid_argument);

  CHECK_THROWS_AS(
      NullCurveRep::raw(DomainSpec::disc(), neg, cplx(2, 0), CVec3::Zero()),
      std::invalid_argument);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    LaurentPoly z, w;
    for (int k = 0; k <= 4; ++k) {
      z.set_coeff(k, cplx(g(rng), g(rng)));
      if (k <= 2) w.set_coeff(k, cplx(g(rng), g(rng)));
    }
    NullCurveRep rep = NullCurveRep::from_weierstrass(DomainSpec::disc(), z, w,
                                                      cplx(0, 0), CVec3::Zero());
    CHECK(rep.nullity_residual() <= 1e-12);
    CHECK(rep.invariants_checked());
  }
}

TEST_CASE("evaluation by antiderivative and by quadrature") {
  NullCurveRep line = seed_line(std::sqrt(2.0));
  const cplx zeta(0.3, 0.4);
  const CVec3 v = evaluate(line, zeta);
  CHECK(std::abs(v(0)) < 1e-14);
  CHECK(std::abs(v(1) - cplx(0, std::sqrt(2.0)) * zeta) < 1e-14);
  CHECK(std::abs(v(2) - std::sqrt(2.0) * zeta) < 1e-14);
  CHECK((evaluate(line, line.base_point()) - line.base_value()).norm() < 1e-15);
  CHECK_THROWS_AS(evaluate(line, cplx(1.5, 0)), std::invalid_argument);

  // Path independence on the annulus for an exact Laurent rep.
  LaurentPoly z;
  z.set_coeff(-2, cplx(0.8, 0.3));
  z.set_coeff(2, cplx(1.0, -0.4));
  const LaurentPoly w = LaurentPoly::constant(cplx(0.6, 0.2));
  NullCurveRep rep = NullCurveRep::from_weierstrass(DomainSpec::annulus(0.4), z, w,
                                                    cplx(0.7, 0), CVec3(1, 2, 3));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ur(0.4, 1.0), ua(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 25; ++trial) {
    const cplx p = std::polar(ur(rng), ua(rng));
    const CVec3 a = evaluate_via(rep, p, EvalPath::RadialThenCircular);
    const CVec3 b = evaluate_via(rep, p, EvalPath::CircularThenRadial);
    const CVec3 c = evaluate(rep, p);
    CHECK((a - b).norm() < 1e-10);
    CHECK((a - c).norm() < 1e-10);
  }
}

TEST_CASE("metric density closed forms") {
  CHECK(metric_density(seed_line(), cplx(0.2, 0.1)) == doctest::Approx(std::sqrt(2.0)));
  const LaurentPoly z1 = LaurentPoly::constant(1.0);
  const LaurentPoly wz = LaurentPoly::monomial(1, 1.0);
  NullCurveRep gauss =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z1, wz, cplx(0, 0), CVec3::Zero());
  CHECK(metric_density(gauss, cplx(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("orthogonal transforms preserve structure") {
  const LaurentPoly z1 = LaurentPoly::constant(1.0);
  const LaurentPoly wz = LaurentPoly::monomial(1, 1.0);
  NullCurveRep rep =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z1, wz, cplx(0, 0), CVec3(1, 0, 0));

  NullCurveRep same = transform(rep, CMat3::Identity());
  CHECK((same.derivative(cplx(0.5, 0.2)) - rep.derivative(cplx(0.5, 0.2))).norm() < 1e-14);

  CMat3 mirror = CMat3::Identity();
  mirror(0, 0) = -1;
  NullCurveRep flipped = transform(rep, mirror);
  CHECK(std::abs(flipped.phi(0).eval(cplx(0.3, 0)) + rep.phi(0).eval(cplx(0.3, 0))) <
        1e-14);
  NullCurveRep back = transform(flipped, mirror);
  CHECK((back.derivative(cplx(0.3, 0.3)) - rep.derivative(cplx(0.3, 0.3))).norm() < 1e-14);

  std::mt19937_64 rng(21);
  const ImmersionReport before = rep.immersion_report(48, 48);
  for (int trial = 0; trial < 8; ++trial) {
    const CMat3 a = random_orthogonal(rng);
    NullCurveRep moved = transform(rep, a);
    CHECK(moved.nullity_residual() <= 1e-12);
    CHECK(moved.invariants_checked());
    const ImmersionReport after = moved.immersion_report(48, 48);
    const double inv_norm2 = matrix_norm(a.inverse().eval());
    CHECK(after.min_density2 >=
          before.min_density2 / (inv_norm2 * inv_norm2) * (1.0 - 1e-10));
  }

  CMat3 not_orth = CMat3::Identity();
  not_orth(0, 1) = 0.1;
  CHECK_THROWS_AS(transform(rep, not_orth), std::invalid_argument);
}

TEST_CASE("flux vanishes exactly and detects the period witness") {
  const LaurentPoly z1 = LaurentPoly::constant(1.0);
  const LaurentPoly wz = LaurentPoly::monomial(1, 1.0);
  NullCurveRep disc_rep =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z1, wz, cplx(0, 0), CVec3::Zero());
  CHECK(flux(disc_rep).norm() < 1e-10);

  LaurentPoly z;
  z.set_coeff(-2, cplx(1.0, 0));
  z.set_coeff(2, cplx(0.5, 0));
  NullCurveRep ann = NullCurveRep::from_weierstrass(
      DomainSpec::annulus(0.5), z, LaurentPoly::constant(0.3), cplx(0.7, 0), CVec3::Zero());
  CHECK(flux(ann).norm() < 1e-10);

  // Non-exact witness: adding zeta^{-1} to the second component puts a 2*pi
  // flux in that slot.
  std::array<LaurentPoly, 3> phi = ann.phi();
  phi[1] += LaurentPoly::monomial(-1, 1.0);
  NullCurveRep witness =
      NullCurveRep::raw(DomainSpec::annulus(0.5), phi, cplx(0.7, 0), CVec3::Zero());
  const Eigen::Vector3d f = flux(witness);
  CHECK(std::abs(f(0)) < 1e-12);
  CHECK(f(1) == doctest::Approx(2.0 * M_PI));
  CHECK(std::abs(f(2)) < 1e-12);

  // The period vector moves by the complex-linear action; flux follows.
  std::mt19937_64 rng(31);
  const CMat3 a = random_orthogonal(rng);
  NullCurveRep moved = transform(witness, a);
  const std::array<cplx, 3> p = witness.periods();
  Eigen::Vector3cd pv(p[0], p[1], p[2]);
  const Eigen::Vector3cd expect = a * pv;
  CHECK((flux(moved) - expect.imag()).norm() < 1e-10);
}

TEST_CASE("intrinsic distance on the flat seed matches the closed form") {
  NullCurveRep line = seed_line();
  std::vector<cplx> center{cplx(0, 0)};
  std::vector<cplx> boundary;
  for (int k = 0; k < 64; ++k) boundary.push_back(std::polar(1.0, 2.0 * M_PI * k / 64));
  const double d = intrinsic_distance(line, center, boundary, 256, 256);
  CHECK(d == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));

  CHECK(intrinsic_distance(line, center, center, 64, 64) == 0.0);
  std::vector<cplx> same{cplx(0.5, 0.1)};
  CHECK(intrinsic_distance(line, same, same, 64, 64) == 0.0);
}

TEST_CASE("intrinsic distance triangle inequality with grid slack") {
  const LaurentPoly z1 = LaurentPoly::constant(1.0);
  const LaurentPoly wz = LaurentPoly::monomial(1, 1.0);
  NullCurveRep rep =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z1, wz, cplx(0, 0), CVec3::Zero());
  const int n = 96;
  double max_density = 0.0;
  for (int k = 0; k < 64; ++k)
    max_density =
        std::max(max_density, metric_density(rep, std::polar(1.0, 2.0 * M_PI * k / 64)));
  const double cell = std::max(1.0 / n, 2.0 * M_PI / n);
  const double slack = 2.0 * cell * max_density;

  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> ur(0.0, 0.95), ua(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 6; ++trial) {
    const std::vector<cplx> a{std::polar(ur(rng), ua(rng))};
    const std::vector<cplx> b{std::polar(ur(rng), ua(rng))};
    const std::vector<cplx> c{std::polar(ur(rng), ua(rng))};
    const double ab = intrinsic_distance(rep, a, b, n, n);
    const double bc = intrinsic_distance(rep, b, c, n, n);
    const double ac = intrinsic_distance(rep, a, c, n, n);
    CHECK(ac <= ab + bc + slack);
  }
}

TEST_CASE("grid shortest path with a blocking mask") {
  GridMetricProblem prob;
  prob.r_min = 0.5;
  prob.r_max = 1.0;
  prob.n_r = 32;
  prob.n_theta = 64;
  prob.density = [](cplx) { return 1.0; };
  prob.from = {cplx(0.75, 0)};
  prob.to = {cplx(-0.75, 0)};
  const double open = grid_shortest_path(prob);
  // Continuous geodesic around the hole: two tangents plus an inner arc,
  // 2 sqrt(0.75^2 - 0.5^2) + 0.5 (pi - 2 acos(2/3)) = 1.8477.
  CHECK(open > 1.847);
  CHECK(open < 1.95);  // stencil overestimates by a few percent at most

  // Two opposite sectors with dead gaps between them are disconnected.
  prob.mask = [](cplx z) {
    const double t = std::abs(std::arg(z));
    return t < M_PI / 4 || t > 3 * M_PI / 4;
  };
  CHECK(std::isinf(grid_shortest_path(prob)));

  GridMetricProblem bad = prob;
  bad.from.clear();
  CHECK_THROWS_AS(grid_shortest_path(bad), std::invalid_argument);
}

TEST_CASE("serialization round trip") {
  LaurentPoly z;
  z.set_coeff(-2, cplx(0.8, 0.3));
  z.set_coeff(2, cplx(1.0, -0.4));
  NullCurveRep rep = NullCurveRep::from_weierstrass(
      DomainSpec::annulus(0.4), z, LaurentPoly::constant(cplx(0.6, 0.2)), cplx(0.7, 0),
      CVec3(1, cplx(0, 2), 3));
  const std::string text = rep.to_text();
  NullCurveRep back = NullCurveRep::from_text(text);
  CHECK(back.to_text() == text);
  CHECK(back.domain().r_in == rep.domain().r_in);
  CHECK(back.invariants_checked());
  CHECK(std::abs(back.base_point() - rep.base_point()) == 0.0);
  CHECK((back.base_value() - rep.base_value()).norm() == 0.0);
  const cplx probe(0.55, 0.33);
  CHECK((back.derivative(probe) - rep.derivative(probe)).norm() < 1e-15);

  CHECK_THROWS_AS(NullCurveRep::from_text("bogus\n"), std::invalid_argument);
}

TEST_CASE("target validation catches malformed pieces") {
  GeneralizedTarget t;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);

  TargetPiece piece;
  piece.label = "probe";
  piece.zeta = {cplx(0.5, 0)};
  piece.values = {CVec3::Zero()};
  piece.derivs = {CVec3(0, cplx(0, 1), 1)};
  t.pieces.push_back(piece);
  CHECK_NOTHROW(t.validate());
  CHECK(t.total_samples() == 1);

  t.pieces[0].derivs[0] = CVec3(1, 1, 1);  // not null
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);

  t.pieces[0].derivs[0] = CVec3(0, cplx(0, 1), 1);
  t.pieces[0].weight = 0.0;
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);

  t.pieces[0].weight = 1.0;
  t.pieces[0].values.clear();
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("fit recovers a constant null line exactly at degree zero") {
  NullCurveRep line = seed_line(2.0);
  GeneralizedTarget target = sample_rep(line, 24, 0.8);
  FitReport report;
  NullCurveRep fit = runge_fit(target, 0, DomainSpec::disc(), {}, &report);
  CHECK(report.sup_value_dev < 1e-12);
  CHECK(report.sup_deriv_dev < 1e-12);
  CHECK(fit.nullity_residual() <= 1e-12);
  const CVec3 d = fit.derivative(cplx(0.1, 0.1));
  CHECK(std::abs(d(0)) < 1e-12);
  CHECK(std::abs(d(1) - cplx(0, 2)) < 1e-12);
  CHECK(std::abs(d(2) - cplx(2, 0)) < 1e-12);
}

TEST_CASE("fit round-trips a polynomial rep at matching degree") {
  LaurentPoly z, w;
  z.set_coeff(0, cplx(1.0, 0.2));
  z.set_coeff(1, cplx(0.3, -0.1));
  z.set_coeff(2, cplx(0.1, 0.05));
  w.set_coeff(0, cplx(0.5, 0.1));
  w.set_coeff(1, cplx(0.2, -0.3));
  NullCurveRep rep = NullCurveRep::from_weierstrass(DomainSpec::disc(), z, w, cplx(0, 0),
                                                    CVec3(0.4, -0.2, 1.0));
  GeneralizedTarget target = sample_rep(rep, 96, 0.9);
  FitOptions opts;
  opts.degree_w = 1;
  FitReport report;
  NullCurveRep fit = runge_fit(target, 2, DomainSpec::disc(), opts, &report);
  CHECK(report.sup_value_dev < 1e-8);
  CHECK(report.sup_deriv_dev < 1e-8);
  CHECK(fit.nullity_residual() <= 1e-12);
  const cplx probe(0.2, -0.4);
  CHECK((evaluate(fit, probe) - evaluate(rep, probe)).norm() < 1e-7);
}

TEST_CASE("fit round-trips a laurent rep with period projection") {
  LaurentPoly z;
  z.set_coeff(-2, cplx(0.8, 0.3));
  z.set_coeff(0, cplx(0.4, 0.0));
  z.set_coeff(2, cplx(1.0, -0.4));
  const LaurentPoly w = LaurentPoly::constant(cplx(0.6, 0.2));
  NullCurveRep rep = NullCurveRep::from_weierstrass(DomainSpec::annulus(0.4), z, w,
                                                    cplx(0.7, 0), CVec3(1, 2, 3));
  TargetPiece inner, outer;
  inner.label = "inner";
  outer.label = "outer";
  for (int k = 0; k < 80; ++k) {
    for (auto [piece, radius] : {std::pair{&inner, 0.45}, std::pair{&outer, 0.95}}) {
      const cplx p = std::polar(radius, 2.0 * M_PI * k / 80);
      piece->zeta.push_back(p);
      piece->values.push_back(evaluate(rep, p));
      piece->derivs.push_back(rep.derivative(p));
    }
  }
  GeneralizedTarget target;
  target.pieces = {inner, outer};
  FitOptions opts;
  opts.kmin = -2;
  opts.degree_w = 0;
  FitReport report;
  NullCurveRep fit = runge_fit(target, 2, DomainSpec::annulus(0.4), opts, &report);
  CHECK(report.sup_value_dev < 1e-8);
  CHECK(report.sup_deriv_dev < 1e-8);
  CHECK(fit.nullity_residual() <= 1e-12);
  CHECK(flux(fit).norm() < 1e-10);
}

TEST_CASE("fit residual is monotone nonincreasing in degree") {
  LaurentPoly z, w;
  std::mt19937_64 rng(91);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k <= 10; ++k) z.set_coeff(k, std::pow(0.55, k) * cplx(g(rng), g(rng)));
  for (int k = 0; k <= 5; ++k) w.set_coeff(k, std::pow(0.5, k) * cplx(g(rng), g(rng)));
  NullCurveRep rep =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z, w, cplx(0, 0), CVec3::Zero());
  GeneralizedTarget target = sample_rep(rep, 128, 0.9);
  double prev = std::numeric_limits<double>::infinity();
  for (int degree : {2, 4, 6, 8}) {
    FitOptions opts;
    opts.degree_w = degree / 2;
    FitReport report;
    runge_fit(target, degree, DomainSpec::disc(), opts, &report);
    const double res = report.sup_value_dev + report.sup_deriv_dev;
    CHECK(res <= prev * (1.0 + 1e-9) + 1e-12);
    prev = res;
  }
}

TEST_CASE("fit reports stagnation instead of throwing") {
  LaurentPoly z, w;
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k <= 8; ++k) z.set_coeff(k, std::pow(0.7, k) * cplx(g(rng), g(rng)));
  for (int k = 0; k <= 4; ++k) w.set_coeff(k, std::pow(0.6, k) * cplx(g(rng), g(rng)));
  NullCurveRep rep =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z, w, cplx(0, 0), CVec3::Zero());
  GeneralizedTarget target = sample_rep(rep, 64, 0.9);
  FitOptions opts;
  opts.max_iter = 2;  // starve the polish so it cannot reach convergence
  FitReport report;
  CHECK_NOTHROW(runge_fit(target, 1, DomainSpec::disc(), opts, &report));
  CHECK(!report.converged);
  CHECK(!report.note.empty());
  CHECK(report.sup_value_dev > 0.0);
}

TEST_CASE("fit input validation") {
  NullCurveRep line = seed_line();
  GeneralizedTarget target = sample_rep(line, 8, 0.5);
  CHECK_THROWS_AS(runge_fit(target, -1, DomainSpec::disc()), std::invalid_argument);
  FitOptions opts;
  opts.kmin = 3;
  CHECK_THROWS_AS(runge_fit(target, 2, DomainSpec::disc(), opts), std::invalid_argument);
  CHECK_THROWS_AS(runge_fit(target, 2, DomainSpec::annulus(0.9)), std::invalid_argument);
}

TEST_CASE("fit with a pinned third component") {
  LaurentPoly z, w;
  z.set_coeff(0, cplx(1.0, 0.1));
  z.set_coeff(1, cplx(0.2, -0.2));
  w.set_coeff(0, cplx(0.3, 0.2));
  w.set_coeff(1, cplx(0.15, 0.1));
  NullCurveRep rep =
      NullCurveRep::from_weierstrass(DomainSpec::disc(), z, w, cplx(0, 0), CVec3::Zero());
  GeneralizedTarget target = sample_rep(rep, 96, 0.9);
  FitOptions opts;
  opts.degree_w = 1;
  opts.fixed_phi3 = z * w;
  opts.polish = false;
  FitReport report;
  NullCurveRep fit = runge_fit(target, 1, DomainSpec::disc(), opts, &report);
  CHECK(report.sup_value_dev < 1e-6);
  CHECK(report.sup_deriv_dev < 1e-6);
  CHECK(fit.nullity_residual() <= 1e-12);
}
