#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dtrans/currents/currents.hpp"

using namespace dtrans;
using namespace dtrans::currents;
using geom::dz;
using geom::dzb;

namespace {

const cplx I(0, 1);
const double pi = std::numbers::pi;

// integral of the radial bump of radius R over C: pi R^2 e (e^-1 + Ei(-1))
double bump_mass(double R) { return pi * R * R * std::exp(1.0) * (std::exp(-1.0) + std::expint(-1.0)); }

std::vector<TestForm> pl_bumps() {
  return {TestForm::bump(0, 1.0, 0, "b0"), TestForm::bump({0.2, 0.1}, 0.9, 0.5, "b1"),
          TestForm::bump(-0.3, 1.2, I, "b2"), TestForm::bump({0, 0.5}, 0.8, 0, "b3"),
          TestForm::bump(2.0, 0.5, 0, "b4")};
}

Current log_abs(double coef, std::function<double(cplx)> h) {
  return l1_current([coef, h](cplx z) { return cplx(0, coef / pi) * h(z); }, {0});
}

}  // namespace

TEST_CASE("test forms: support, value and symbolic ddbar") {
  auto b = TestForm::bump({0.1, -0.2}, 0.7, {0.3, 0.4}, "b");
  Point c{cplx(0.1, -0.2)};
  CHECK(std::abs(b(c)[0] - 1.0) < 1e-14);
  Point far{cplx(0.9, 0)};
  CHECK(b(far)[0] == cplx(0));
  CHECK(b.bidegree() == std::pair{0, 0});
  auto h = b.ddbar();
  CHECK(h.bidegree() == std::pair{1, 1});
  auto fd = geom::exterior(geom::exterior(b.field(), geom::ExteriorOp::DelBar), geom::ExteriorOp::Del, 1e-3);
  for (cplx z : {cplx(0.2, -0.1), cplx(-0.2, -0.3), cplx(0.3, 0.1)}) {
    Point p{z};
    auto a = h(p), n = fd.eval(p);
    CHECK(std::abs(a[dz(0) | dzb(1, 0)] - n[dz(0) | dzb(1, 0)]) < 1e-6 * (1 + std::abs(a[3])));
  }
  CHECK_THROWS_AS(TestForm(1, {{0, Expr(1.0)}, {dz(0), Expr(1.0)}}, {0}, {1}), std::invalid_argument);
}

TEST_CASE("quadrature: constant integrand and log singular integrals") {
  auto one = [](cplx) { return cplx(1); };
  CHECK(std::abs(integrate_l1(one, {0.3, 0.2}, 1.5, {}) - pi * 2.25) < 1e-10 * pi * 2.25);
  CHECK(std::abs(integrate_l1(one, 0, 1.0, {{0.4, 0.1}}) - pi) < 1e-10 * pi);
  CHECK(std::abs(integrate_box(geom::FormField{1, [](std::span<const cplx>) {
                                                 return geom::Form::basis(1, dz(0) | dzb(1, 0), I / 2.0);
                                               }, {}},
                               {{0, 1, 0, 1}}, 8) -
                 1.0) < 1e-14);

  auto lg = [](cplx z) { return cplx(std::abs(std::log(std::abs(z)))); };
  cplx v = integrate_l1(lg, 0, 1.0, {0});
  CHECK(std::abs(v - pi / 2) < 1e-6);
  auto lg2 = [](cplx z) { return cplx(std::log(std::abs(z * z))); };
  CHECK(std::abs(integrate_l1(lg2, 0, 1.0, {0}) + 2.0 * v) < 1e-9);

  auto bad = [](cplx z) { return cplx(1 / std::norm(z)); };
  CHECK_THROWS_AS(integrate_l1(bad, 0, 1.0, {0}), NonConvergent);
  CHECK_THROWS_AS(integrate_l1(one, 0, 1.0, {0.1, -0.1}), std::domain_error);
}

TEST_CASE("analytic currents") {
  auto pt = point_current(1, {{{0}, 2}});
  CHECK(std::abs(pt(TestForm::bump(0, 1.0)) - 2.0) < 1e-15);
  CHECK(pt(TestForm::bump(3.0, 1.0)) == cplx(0));
  CHECK_THROWS_AS(pt(TestForm::bump(0, 1.0).wedge_basis(dz(0) | dzb(1, 0))), std::invalid_argument);
  CHECK_THROWS_AS(point_current(1, {{{0}, 0}}), std::invalid_argument);

  // line {z1 = 0} in C^2
  auto line = analytic_current(2, {{{0, 0}, {{0, 1}}, 1}});
  CHECK(line.bidimension == std::pair{1, 1});
  const double R = 0.8;
  auto eta = TestForm::product_bump({0, {0.2, 0.1}}, {0.3, R}).wedge_basis(dz(1) | dzb(2, 1));
  cplx want = cplx(0, -2) * bump_mass(R);
  CHECK(std::abs(line(eta) - want) < 1e-7 * std::abs(want));
  auto off = TestForm::product_bump({1.0, 0}, {0.3, R}).wedge_basis(dz(1) | dzb(2, 1));
  CHECK(line(off) == cplx(0));
  CHECK_THROWS_AS(line(TestForm::product_bump({0, 0}, {1, 1})), std::invalid_argument);
}

TEST_CASE("pairing linearity and locality") {
  auto T = log_abs(1, [](cplx z) { return std::log(std::abs(z)); });
  auto e1 = TestForm::bump(0.1, 1.0, 0, "e1").ddbar(), e2 = TestForm::bump(0.1, 1.0, {0.2, 0.7}, "e2").ddbar();
  cplx a(0.3, -1.2), b(2.5, 0.4);
  cplx lhs = T(e1.scaled(a).plus(e2.scaled(b)));
  cplx rhs = a * T(e1) + b * T(e2);
  CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs));

  auto line = analytic_current(2, {{{0, 0}, {{0, 1}}, 3}});
  auto off = TestForm::product_bump({{1.5, 0.5}, 0}, {0.4, 1.0}).wedge_basis(dz(1) | dzb(2, 1));
  CHECK(std::abs(line(off)) < 1e-12);
}

TEST_CASE("ddbar pairing: Poincare-Lelong for s = z") {
  auto T = log_abs(1, [](cplx z) { return std::log(std::abs(z)); });
  auto tests = pl_bumps();
  auto rep = transgression_residual({{1.0, point_current(1, {{{0}, 1}})}}, T, tests);
  double worst = 0;
  for (const auto& r : rep) worst = std::max(worst, r.abs_residual);
  CHECK(worst < 1e-3);
  CHECK(worst < 1e-7);
  CHECK(std::abs(ddbar_pair(T, tests[0]) - 1.0) < 1e-7);
  CHECK(std::abs(ddbar_pair(T, tests[4])) < 1e-8);

  TestForm zero(1, {}, {0}, {1}, "zero");
  CHECK(ddbar_pair(T, zero) == cplx(0));
}

TEST_CASE("ddbar pairing: integration by parts for smooth g") {
  auto T = l1_current([](cplx z) { return cplx(std::log(1 + std::norm(z))); }, {});
  geom::FormField ddg{1, [](std::span<const cplx> z) {
                        return geom::Form::basis(1, dz(0) | dzb(1, 0), 1 / std::pow(1 + std::norm(z[0]), 2));
                      }, {}};
  auto S = form_current(ddg, {1, 1});
  for (const auto& eta : pl_bumps()) {
    cplx a = ddbar_pair(T, eta), b = S(eta);
    CHECK(std::abs(a - b) <= 1e-6 * std::max(1e-12, std::abs(b)));
  }
}

TEST_CASE("generalized Poincare-Lelong for s = (z^2, z^3) in flat C^2") {
  auto hE = geom::MetricField::identity(1, 2);
  std::vector<Expr> s{pow(Expr::z(0), 2), pow(Expr::z(0), 3)};
  auto c1 = geom::chern_form(geom::section_line_dual_metric(hE, s), 1);
  auto T = log_abs(-1, [](cplx z) { return std::log(std::abs(z * z) * std::sqrt(1 + std::norm(z))); });
  std::vector<Term> lhs{{-1.0, form_current(c1, {1, 1}, {}, {0})}, {-2.0, point_current(1, {{{0}, 1}})}};
  auto rep = transgression_residual(lhs, T, pl_bumps());
  for (const auto& r : rep) CHECK(r.abs_residual < 1e-2);
  for (const auto& r : rep) CHECK(r.abs_residual < 1e-6);
}

TEST_CASE("fiber potential and the point Thom-Gysin identity") {
  for (double v : {1e-6, 0.1, 0.5, 1.0, 2.0}) {
    cplx want = cplx(0, 1 / pi) * (0.5 * std::log1p(v * v) - std::log(v));
    CHECK(std::abs(point_fiber_potential(v) - want) < 1e-8);
  }
  CHECK_THROWS_AS(point_fiber_potential(0), std::domain_error);

  auto model = chern_model(geom::MetricField::identity(1, 1), geom::dual_tautological_metric, 1);
  auto omegaE = pullback_family(model, {Expr::z(0)}, 1.0);
  cplx mass = geom::integrate_c1(geom::p1_dual_tautological());
  auto T = point_fiber_potential_current();
  std::vector<Term> lhs{{1.0, form_current(omegaE, {1, 1})}, {-1.0, scaled(point_current(1, {{{0}, 1}}), mass)}};
  std::vector<TestForm> tests{TestForm::bump(0, 1.0, 0, "c0"), TestForm::bump(0, 1.0, {0.4, -0.2}, "c1"),
                              TestForm::bump(0, 1.0, I, "c2")};
  for (const auto& r : transgression_residual(lhs, T, tests)) CHECK(r.abs_residual < 1e-6);
}

TEST_CASE("pullback families") {
  auto hE = geom::MetricField::parse(1, {{"1 + abs2(z)", "z/2"}, {"zb/2", "2"}});
  // lambda = 0 lands on the zero section where Q is E
  auto Q = chern_model(hE, geom::quotient_metric, 1);
  std::vector<Expr> s{Expr::z(0), pow(Expr::z(0), 2)};
  auto p0 = pullback_family(Q, s, 0.0);
  auto ref = geom::chern_form(hE, 1);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3)}) {
    Point p{z};
    CHECK((p0.eval(p) - ref.eval(p)).max_abs() < 1e-8);
  }

  // constant section: the pullback is the model form at the base point, restricted
  auto tau = chern_model(hE, geom::dual_tautological_metric, 1);
  auto pz = pullback_family(tau, {Expr(0.0), Expr(0.0)}, 1.0);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3)}) {
    Point p{z}, q{z, 0, 0};
    CHECK(std::abs(pz.eval(p)[3] - tau.charts[0].eval(q)[geom::dz(0) | geom::dzb(3, 0)]) < 1e-12);
  }

  // agrees with substituting into the chart-0 metric, in both chart regimes
  for (cplx lam : {cplx(0.5), cplx(40.0, 10.0)}) {
    auto pf = pullback_family(tau, s, lam);
    auto direct = geom::chern_form(geom::pullback_dual_tautological(hE, s, lam), 1);
    for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3)}) {
      Point p{z};
      auto a = pf.eval(p), b = direct.eval(p);
      CHECK((a - b).max_abs() < 1e-8 * (1 + b.max_abs()));
    }
  }
  CHECK_THROWS_AS(pullback_family(tau, {Expr::zb(0), Expr(0.0)}, 1.0), std::invalid_argument);
}

TEST_CASE("weak limits: synthetic sequences") {
  std::vector<SweepPoint> cst, syn, osc;
  int sign = 1;
  for (double l : {10.0, 30.0, 100.0, 300.0, 1000.0}) {
    cst.push_back({l, {1.5, -0.5}});
    syn.push_back({l, cplx(0.7, 0.2) + 3.0 / l});
    osc.push_back({l, 1.0 + sign / l});
    sign = -sign;
  }
  auto c = weak_limit(cst);
  CHECK(std::isinf(c.alpha));
  CHECK(c.limit == cplx(1.5, -0.5));
  auto w = weak_limit(syn);
  CHECK(w.extrapolated);
  CHECK(std::abs(w.limit - cplx(0.7, 0.2)) < 1e-8);
  CHECK(std::abs(w.alpha - 1) < 1e-4);
  auto o = weak_limit(osc);
  CHECK(o.oscillatory);
  CHECK(!o.extrapolated);
  CHECK(o.limit == osc.back().value);
  CHECK_THROWS_AS(weak_limit({{1, 0}, {2, 0}, {3, 0}}), std::invalid_argument);
}

TEST_CASE("weak limits: (lambda s)^* c1(tau*) tends to the multiplicity") {
  auto model = chern_model(geom::MetricField::identity(1, 1), geom::dual_tautological_metric, 1);
  auto eta = TestForm::bump({0.05, 0.02}, 0.9, {0.3, 0}, "eta");
  double eta0 = eta(Point{0})[0].real();
  for (int k : {1, 2, 3}) {
    std::vector<SweepPoint> sweep;
    for (double l : {10.0, 31.6, 100.0, 316.0, 1000.0, 3160.0, 10000.0}) {
      auto w = pullback_family(model, {pow(Expr::z(0), k)}, l);
      sweep.push_back({l, form_current(w, {1, 1}, {}, {0})(eta)});
    }
    auto L = weak_limit(sweep);
    INFO("k = " << k << " alpha = " << L.alpha << " residual = " << L.residual);
    CHECK(L.extrapolated);
    CHECK(std::abs(L.limit - double(k) * eta0) < 1e-2);
  }
}
