#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "dtrans/geom/bundles.hpp"
#include "dtrans/geom/superconnection.hpp"

using namespace dtrans::geom;

namespace {

constexpr double kPi = std::numbers::pi;
const Mask kTop1 = dz(0) | dzb(1, 0);

Expr z1() { return Expr::z(0); }

Point pt(std::initializer_list<cplx> v) { return Point(v); }

double err(cplx a, cplx b) { return std::abs(a - b); }

// h = I + B B^* with B polynomial in z (entries random small integers / 4).
MetricField random_metric(std::mt19937& rng, std::size_t n, std::size_t r) {
  std::uniform_int_distribution<int> c(-2, 2);
  std::vector<Expr> B(r * r);
  for (auto& b : B) {
    b = Expr(0.25 * c(rng));
    for (std::size_t k = 0; k < n; ++k) b = b + Expr(cplx(c(rng), c(rng)) * 0.25) * Expr::z(k);
    b = b + Expr(0.125 * c(rng)) * Expr::z(0) * Expr::z(n - 1);
  }
  std::vector<Expr> h(r * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      Expr s = i == j ? Expr(1.0) : Expr();
      for (std::size_t k = 0; k < r; ++k) s = s + B[i * r + k] * B[j * r + k].conj();
      h[i * r + j] = s;
    }
  return MetricField(n, r, h);
}

}  // namespace

TEST_CASE("expressions: parse, evaluate, differentiate") {
  Expr e = parse_expr("z^2 zb + 3 exp(z zb) - log(1 + abs2(z))/2 + i", 1);
  cplx z = {0.3, -0.7};
  cplx expect = z * z * std::conj(z) + 3.0 * std::exp(std::norm(z)) - 0.5 * std::log(1 + std::norm(z)) + cplx(0, 1);
  CHECK(err(e.eval(pt({z})), expect) < 1e-13);

  // Wirtinger derivatives against central differences
  for (bool bar : {false, true}) {
    Expr d = e.diff(0, bar);
    double t = 1e-5;
    cplx dx = (e.eval(pt({z + t})) - e.eval(pt({z - t}))) / (2 * t);
    cplx dy = (e.eval(pt({z + cplx(0, t)})) - e.eval(pt({z - cplx(0, t)}))) / (2 * t);
    cplx fd = 0.5 * (dx + (bar ? cplx(0, 1) : cplx(0, -1)) * dy);
    CHECK(err(d.eval(pt({z})), fd) < 1e-7);
  }

  Expr two = parse_expr("z1 conj(z2) + zb1^(-1)", 2);
  Point p = pt({{1, 2}, {0.5, -1}});
  CHECK(err(two.eval(p), p[0] * std::conj(p[1]) + 1.0 / std::conj(p[0])) < 1e-14);
  CHECK(err(two.conj().eval(p), std::conj(two.eval(p))) < 1e-14);
  CHECK(two.arity() == 2);

  Expr sub = two.substitute({Expr::z(0) * Expr::z(0), Expr(2.0)});
  CHECK(err(sub.eval(pt({{0.5, 0.5}})), cplx(0.5, 0.5) * cplx(0.5, 0.5) * 2.0 + 1.0 / std::conj(cplx(0.5, 0.5) * cplx(0.5, 0.5))) < 1e-14);

  Tape tape({e, e.diff(0), two.shift(0)});
  CHECK(err(tape.eval(pt({z, 0}))[0], e.eval(pt({z}))) < 1e-15);

  CHECK_THROWS_AS(parse_expr("z + w", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("z^", 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("(z", 1), std::invalid_argument);
  CHECK(parse_expr("2z", 1).eval(pt({3})) == cplx(6));
}

TEST_CASE("wedge signs and graded commutativity") {
  CHECK(wedge_sign(dz(0), dzb(1, 0)) == 1);
  CHECK(wedge_sign(dzb(1, 0), dz(0)) == -1);
  CHECK(wedge_sign(dz(0), dz(0)) == 0);
  std::mt19937 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2;
    int da = trial % 3 + 1, db = (trial / 3) % 3 + 1;
    Form a(n), b(n);
    for (Mask m = 0; m < a.size(); ++m) {
      if (degree(m) == da) a[m] = {g(rng), g(rng)};
      if (degree(m) == db) b[m] = {g(rng), g(rng)};
    }
    Form ab = a.wedge(b), ba = b.wedge(a);
    double s = (da * db) % 2 ? -1 : 1;
    CHECK((ab - s * ba).max_abs() < 1e-12);
    // bidegrees add
    for (Mask m = 0; m < ab.size(); ++m)
      if (std::abs(ab[m]) > 0) CHECK(degree(m) == da + db);
    CHECK((a.conj().conj() - a).max_abs() == 0);
  }
  // conj(dz ^ dzb) = dzb ^ dz = -dz ^ dzb
  Form f = Form::basis(1, kTop1);
  CHECK(f.conj()[kTop1] == cplx(-1));
  CHECK(Form::basis(1, kTop1).top_density() == cplx(0, -2));
}

TEST_CASE("chern connection") {
  Point z = pt({{0.4, -0.3}});
  CHECK(chern_connection(MetricField::identity(1, 2), z).nilpotent_norm() == 0);
  auto h = MetricField::scalar(1, 1.0 + abs2(z1()));
  cplx zz = z[0];
  CHECK(err(chern_connection(h, z)[dz(0)](0, 0), std::conj(zz) / (1 + std::norm(zz))) < 1e-15);
  auto g = MetricField::scalar(1, exp(abs2(z1())));
  CHECK(err(chern_connection(g, z)[dz(0)](0, 0), std::conj(zz)) < 1e-14);
  auto bad = MetricField::scalar(1, abs2(z1()));
  CHECK_THROWS_AS(chern_connection(bad, pt({0})), std::domain_error);
}

TEST_CASE("curvature closed forms") {
  for (cplx zz : {cplx(0), cplx(0.4, -0.3), cplx(-1.5, 2)}) {
    Point z{zz};
    auto h = MetricField::scalar(1, 1.0 + abs2(z1()));
    MatForm F = curvature(h, z);
    double den = std::pow(1 + std::norm(zz), 2);
    CHECK(err(F[kTop1](0, 0), -1.0 / den) < 1e-14);
    CHECK(F[dz(0)].norm() == 0);
    CHECK(err(curvature(MetricField::scalar(1, exp(abs2(z1()))), z)[kTop1](0, 0), -1.0) < 1e-13);
    CHECK(curvature(MetricField::identity(1, 3), z).nilpotent_norm() == 0);
  }
  // d d-bar log(1 + |z|^2) by finite differences equals -Theta
  FormField logh{1, [](std::span<const cplx> z) { return Form::scalar(1, std::log(1 + std::norm(z[0]))); }, {}};
  FormField ddbar = exterior(exterior(logh, ExteriorOp::DelBar), ExteriorOp::Del);
  Point z = pt({{0.3, 0.2}});
  CHECK(err(ddbar(z)[kTop1], 1.0 / std::pow(1 + std::norm(z[0]), 2)) < 1e-7);
  // dbar(zb dz) = dzb ^ dz
  FormField t{1, [](std::span<const cplx> z) { return Form::basis(1, dz(0), std::conj(z[0])); }, {}};
  CHECK(err(exterior(t, z, ExteriorOp::DelBar)[kTop1], -1.0) < 1e-9);
  CHECK(exterior(t, z, ExteriorOp::Del).max_abs() < 1e-9);
}

TEST_CASE("metric validation") {
  std::mt19937 rng(5);
  auto h = random_metric(rng, 2, 2);
  std::vector<Point> samples{pt({{0.1, 0.2}, {-0.3, 0.1}}), pt({{0.5, -0.5}, {0.2, 0.7}}), pt({0, 0})};
  auto c = validate(h, samples);
  CHECK(c.ok);
  CHECK(c.hermitian_error < 1e-14);
  CHECK(c.min_eigenvalue >= 1 - 1e-12);
  REQUIRE(c.fd_error.size() == 2);
  CHECK(c.fd_error[0] < 1e-6);
  CHECK(c.fd_error[1] < 1e-6);
  // errors decay with the step until rounding dominates
  CHECK(c.fd_error[1] < std::max(c.fd_error[0], 1e-9));

  MetricField notherm(1, 2, {Expr(1.0), Expr(cplx(0, 1)), Expr(cplx(0, 1)), Expr(1.0)});
  CHECK(!validate(notherm, {pt({0})}).ok);
  auto indef = MetricField::scalar(1, Expr(-1.0));
  CHECK(validate(indef, {pt({0})}).min_eigenvalue < 0);
}

TEST_CASE("chern forms") {
  Point z = pt({{0.3, 0.1}});
  CHECK(chern_form(MetricField::identity(1, 2), 1, z).max_abs() == 0);
  CHECK(chern_form(MetricField::scalar(1, 1.0 + abs2(z1())), 0, z)[0] == cplx(1));
  CHECK_THROWS_AS(chern_form(MetricField::scalar(1, 1.0 + abs2(z1())), 2, z), std::invalid_argument);

  // c1 of tau* is (1/pi) dA/(1+r^2)^2
  auto atlas = p1_dual_tautological();
  Form c1 = chern_form(atlas.chart0, 1, z);
  CHECK(err(c1.top_density(), 1 / (kPi * std::pow(1 + std::norm(z[0]), 2))) < 1e-15);

  // chern forms are real and c1 agrees with the trace formula for rank 2
  std::mt19937 rng(9);
  auto h = random_metric(rng, 2, 2);
  Point p = pt({{0.2, -0.1}, {0.4, 0.3}});
  for (int j = 0; j <= 2; ++j) {
    Form c = chern_form(h, j, p);
    CHECK((c - c.conj()).max_abs() < 1e-12);
    CHECK(c.max_off_diagonal() < 1e-14);
  }
  Form tr = (cplx(0, 1) / (2 * kPi)) * curvature(h, p).trace();
  CHECK((chern_form(h, 1, p) - tr).max_abs() < 1e-14);
  // Bianchi: d c_j = 0
  for (int j = 1; j <= 2; ++j) CHECK(exterior(chern_form(h, j), p, ExteriorOp::D).max_abs() < 1e-6);
}

TEST_CASE("degree of tau* on P^1 and metric invariance") {
  auto atlas = p1_dual_tautological();
  CHECK(std::abs(integrate_c1(atlas) - 1.0) < 1e-6);
  // each chart disk carries exactly half
  CHECK(std::abs(integrate_disk([&](cplx w) { return chern_form(atlas.chart0, 1, Point{w}).top_density(); }, 0, 1) -
                 0.5) < 1e-12);
  for (const auto& [f0, f1] : p1_perturbations(0.3)) {
    auto pert = conformal(atlas, f0, f1);
    CHECK(validate(pert.chart0, {pt({0.3}), pt({{-0.5, 0.8}})}).ok);
    cplx v = integrate_c1(pert);
    CHECK(std::abs(v - 1.0) < 1e-6);
  }
}

TEST_CASE("fiber integration") {
  // P(C + E) over a base disk, E = C with metric exp(|z|^2)
  MetricField hE = MetricField::scalar(1, exp(abs2(z1())));
  ProjectiveChart c0{hE, 0}, c1{hE, 1};
  FormField w0 = chern_form(dual_tautological_metric(c0), 1);
  FormField w1 = chern_form(dual_tautological_metric(c1), 1);
  for (cplx b : {cplx(0), cplx(0.3, -0.2), cplx(1.1, 0.4)}) {
    FiberIntegral f = fiber_integrate(w0, w1, Point{b});
    CHECK(!f.degree_too_low);
    CHECK(std::abs(f.form[0] - 1.0) < 1e-6);
    CHECK(f.form.max_abs() - std::abs(f.form[0]) < 1e-6);
  }
  // a pulled-back base form has no fiber component
  FormField base{2, [](std::span<const cplx>) { return Form::basis(2, dz(0) | dzb(2, 0), 1.0); }, {}};
  FiberIntegral z = fiber_integrate(base, base, Point{0.2});
  CHECK(z.degree_too_low);
  CHECK(z.form.max_abs() == 0);

  // over a point: integral of log|t - 1| times the pulled-back c1(tau*) along t -> [1 : t v]
  for (cplx v : {cplx(0.5), cplx(1), cplx(2), cplx(0.3, 0.4)}) {
    auto f = [v](cplx t) { return std::log(std::abs(t - 1.0)) * std::norm(v) / (kPi * std::pow(1 + std::norm(v * t), 2)); };
    cplx num = integrate_plane_singular(f, 1.0, 0.5);
    double closed = 0.5 * std::log(1 + std::norm(v)) - std::log(std::abs(v));
    CHECK(std::abs(num - closed) < 1e-8);
  }
}

TEST_CASE("induced bundles") {
  std::mt19937 rng(2);
  MetricField hE = random_metric(rng, 1, 2);
  ProjectiveChart c0{hE, 0};
  MetricField Q = quotient_metric(c0);
  REQUIRE(Q.rank() == 2);
  REQUIRE(Q.n() == 3);
  // zero section [1:0]: Q = E
  for (cplx b : {cplx(0), cplx(0.4, 0.1)}) {
    Point p{b, 0, 0};
    CHECK((Q.value(p) - hE.value(Point{b})).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(validate(Q, {Point{b, 0.3, cplx(0.1, 0.2)}}).ok);
  }
  // along P(E) (chart 1, first slot zero): Q splits off a flat C
  ProjectiveChart c1{hE, 1};
  MetricField Q1 = quotient_metric(c1);
  Point onPE{cplx(0.2, 0.1), 0, cplx(0.5, -0.3)};
  cmat q = Q1.value(onPE);
  CHECK(std::abs(q(0, 1)) < 1e-10);
  CHECK(std::abs(q(1, 0)) < 1e-10);
  CHECK(std::abs(q(0, 0) - 1.0) < 1e-10);
  // tautological metric restricted to the chart
  Point p{0.3, cplx(0.2, 0.1), -0.4};
  cmat h = hE.value(Point{p[0]});
  Eigen::Vector3cd u(1, p[1], p[2]);
  cmat H = cmat::Identity(3, 3);
  H.bottomRightCorner(2, 2) = h;
  CHECK(err(tautological_metric(c0).value(p)(0, 0), (u.adjoint() * H * u)(0, 0)) < 1e-12);

  // L_s for s = z over flat C is |z|^2
  MetricField L = section_line_metric(MetricField::identity(1, 1), {z1()});
  CHECK(err(L.value(Point{cplx(0.3, 0.4)})(0, 0), 0.25) < 1e-15);
  // Q_s orthogonal complement of s = (z^2, z^3)
  MetricField flat2 = MetricField::identity(1, 2);
  std::vector<Expr> s{pow(z1(), 2), pow(z1(), 3)};
  Point m{cplx(0.5, 0.2)};
  std::size_t j = dominant_slot(flat2, s, m);
  CHECK(j == 0);
  MetricField Qs = section_quotient_metric(flat2, s, j);
  cplx s0 = m[0] * m[0], s1 = s0 * m[0];
  CHECK(err(Qs.value(m)(0, 0), 1.0 - std::norm(s1) / (std::norm(s0) + std::norm(s1))) < 1e-14);
  CHECK_THROWS_AS(dominant_slot(flat2, s, Point{0}), std::domain_error);
  // c1(L_s) = c1(Q_s) complement: c1(L_s) + c1(Q_s) = c1(E) = 0 for flat E
  Form sum = chern_form(section_line_metric(flat2, s), 1, m) + chern_form(Qs, 1, m);
  CHECK(sum.max_abs() < 1e-12);

  // pulled-back family: c1 of (lambda s)^* tau* equals the metric 1/(1 + |lambda s|^2)
  MetricField pb = pullback_dual_tautological(MetricField::identity(1, 1), {z1()}, 2.0);
  cplx zz(0.3, -0.1);
  double lam2 = 4.0;
  CHECK(err(chern_form(pb, 1, Point{zz}).top_density(), lam2 / (kPi * std::pow(1 + lam2 * std::norm(zz), 2))) < 1e-14);
}

TEST_CASE("superconnection curvature and chern character") {
  auto flat = MetricField::identity(1, 1);
  SuperBundleData d(flat, flat, {z1()});
  auto eps = d.grading();
  cplx zz(0.3, 0.4);
  Point z{zz};
  // lambda = 0, flat: block-diagonal, ch = rank difference
  MatForm F0 = superconnection_curvature(d, 0.0, z);
  CHECK(F0[0].norm() == 0);
  CHECK(F0.nilpotent_norm() == 0);
  SuperBundleData two(MetricField::identity(1, 2), flat, {z1(), Expr(1.0)});
  Form ch0 = super_chern_character(superconnection_curvature(two, 0.0, z), two.grading());
  CHECK(err(ch0[0], 1.0) < 1e-14);
  CHECK(ch0.degree_part(2).max_abs() < 1e-14);

  // A = z, lambda = 1: F = diag(|z|^2, |z|^2) + [[0, dzb], [dz, 0]]
  MatForm F = superconnection_curvature(d, 1.0, z);
  CHECK(std::abs(F[0](0, 0) - std::norm(zz)) < 1e-15);
  CHECK(std::abs(F[0](1, 1) - std::norm(zz)) < 1e-15);
  CHECK(std::abs(F[0](0, 1)) + std::abs(F[0](1, 0)) < 1e-15);
  CHECK(err(F[dzb(1, 0)](0, 1), 1.0) < 1e-15);
  CHECK(err(F[dz(0)](1, 0), 1.0) < 1e-15);
  CHECK(std::abs(F[dz(0)](0, 1)) + std::abs(F[dzb(1, 0)](1, 0)) < 1e-15);
  // degree-2 part: raw str exp(-F) = |lambda|^2 exp(-|lambda z|^2) dz ^ dzb
  for (double lam : {1.0, 3.0}) {
    Form raw = super_chern_character(superconnection_curvature(d, lam, z), eps, {true, false});
    CHECK(err(raw[kTop1], lam * lam * std::exp(-lam * lam * std::norm(zz))) < 1e-13);
    CHECK(std::abs(raw[0]) < 1e-14);
    Form ch = super_chern_character(superconnection_curvature(d, lam, z), eps);
    CHECK(err(ch.top_density(), lam * lam * std::exp(-lam * lam * std::norm(zz)) / kPi) < 1e-13);
  }
}

TEST_CASE("superconnection chern character is (p,p) and closed") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int trial = 0; trial < 2; ++trial) {
    auto hp = random_metric(rng, 2, 2);
    auto hm = random_metric(rng, 2, 1);
    std::vector<Expr> A;
    for (int k = 0; k < 2; ++k)
      A.push_back(Expr(0.5 * c(rng)) + Expr(0.5 * c(rng)) * Expr::z(0) + Expr(cplx(0, 0.5 * c(rng))) * Expr::z(1) +
                  0.25 * Expr::z(0) * Expr::z(1));
    SuperBundleData d(hp, hm, A);
    for (cplx lambda : {cplx(0), cplx(1), cplx(10)}) {
      FormField ch = super_chern_character(d, lambda);
      for (Point p : {pt({{0.1, 0.2}, {-0.2, 0.1}}), pt({{0.3, -0.1}, {0.05, 0.25}})}) {
        Form v = ch(p);
        CHECK(v.max_off_diagonal() < 1e-10);
        CHECK(exterior(ch, p, ExteriorOp::D).max_abs() < 1e-6);
      }
    }
    // lambda = 0: str exp(-F) = ch(E+) - ch(E-) in the trace sense
    Point p = pt({{0.1, 0.2}, {-0.2, 0.1}});
    Form s = super_chern_character(superconnection_curvature(d, 0.0, p), d.grading(), {true, false});
    auto ordinary = [&](const MetricField& h) {
      MatForm F = curvature(h, p);
      std::vector<double> even(h.rank(), 1.0);
      return exp_even(-1.0 * F, even).trace();
    };
    CHECK((s - (ordinary(hp) - ordinary(hm))).max_abs() < 1e-12);
  }
}

TEST_CASE("chain case: Koszul complex on C^2") {
  // E0 = C -> E1 = C^2 -> E2 = C with d0 = (z1, z2), d1 = (z2, -z1)
  auto E1 = MetricField::identity(2, 2);
  std::mt19937 rng(4);
  auto hp = random_metric(rng, 2, 2);  // metric on E0 + E2
  Expr Z1 = Expr::z(0), Z2 = Expr::z(1);
  // A: E+ = E0 + E2 -> E- = E1 ; B: E1 -> E0 + E2
  std::vector<Expr> A{Z1, Expr(), Z2, Expr()};
  std::vector<Expr> B{Expr(), Expr(), Z2, -Z1};
  SuperBundleData d(hp, E1, A, B);
  Point p = pt({{0.2, 0.1}, {-0.1, 0.3}});
  CHECK(d.chain_defect(p) < 1e-12);
  for (cplx lambda : {cplx(1), cplx(2.5)}) {
    FormField ch = super_chern_character(d, lambda);
    CHECK(ch(p).max_off_diagonal() < 1e-10);
    CHECK(exterior(ch, p, ExteriorOp::D).max_abs() < 1e-6);
  }
}
