#include "dtrans/verify/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "dtrans/cone/cone.hpp"
#include "dtrans/cstar/action.hpp"
#include "dtrans/currents/currents.hpp"
#include "dtrans/geom/bundles.hpp"
#include "dtrans/geom/superconnection.hpp"
#include "dtrans/grassmann/correspondence.hpp"

#ifndef DTRANS_DATA_DIR
#define DTRANS_DATA_DIR "data"
#endif

namespace dtrans::verify {

namespace {

using currents::Current;
using currents::SweepPoint;
using currents::TestForm;
using geom::cplx;
using geom::Expr;
using geom::Point;
using P = Provenance;

constexpr double kPi = std::numbers::pi;
const cplx kI(0, 1);

struct Ctx {
  Report& rep;
  const ScenarioConfig& cfg;
  const RunOptions& opt;
  std::mt19937_64 rng;

  void check(std::string name, json expected, json actual, double residual, double tol, P p) {
    rep.records.push_back({std::move(name), std::move(expected), std::move(actual), residual, tol * opt.tol_scale, p});
  }
  void exact(std::string name, long long expected, long long actual, P p) {
    check(std::move(name), expected, actual, std::abs(double(expected - actual)), 0, p);
  }
  void pairing(std::string name, cplx expected, cplx actual, double tol, P p) {
    check(std::move(name), complex_json(expected), complex_json(actual), std::abs(expected - actual), tol, p);
  }
  std::filesystem::path artifact(const std::string& label) {
    std::string file = cfg.name + "_" + label + ".csv";
    rep.artifacts.push_back(file);
    return cfg.out_dir / file;
  }
  void sweep_csv(const std::string& label, const std::vector<SweepPoint>& s) {
    auto path = artifact(label);
    if (opt.write_files) write_sweep_csv(path, s);
  }
};

using Runner = std::function<void(Ctx&)>;

// ---- shared config readers

Expr expr(const std::string& text, const std::vector<std::string>& vars, const std::string& where) {
  try {
    return geom::parse_expr(text, vars);
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

struct BumpSpec {
  std::string id;
  cplx center = 0;
  double radius = 1;
  cplx slope = 0;
  TestForm form() const { return TestForm::bump(center, radius, slope, id); }
};

std::vector<BumpSpec> read_bumps(Block& b, const std::string& key, std::vector<BumpSpec> def) {
  if (!b.has(key)) {
    b.list(key);
    return def;
  }
  std::vector<BumpSpec> out;
  for (auto& e : b.list(key)) {
    BumpSpec s;
    s.id = e.text("id", "eta" + std::to_string(out.size()));
    s.center = e.complex("center", 0);
    s.radius = e.positive("radius", 1);
    s.slope = e.complex("slope", 0);
    e.finish();
    for (const auto& o : out)
      if (o.id == s.id) throw ConfigError(b.path() + "." + key + ": duplicate id '" + s.id + "'");
    out.push_back(s);
  }
  if (out.empty()) throw ConfigError(b.path() + "." + key + ": needs at least one test form");
  return out;
}

BumpSpec read_bump(Block b, BumpSpec def) {
  def.id = b.text("id", def.id);
  def.center = b.complex("center", def.center);
  def.radius = b.positive("radius", def.radius);
  def.slope = b.complex("slope", def.slope);
  b.finish();
  return def;
}

std::vector<TestForm> forms(const std::vector<BumpSpec>& s) {
  std::vector<TestForm> out;
  for (const auto& b : s) out.push_back(b.form());
  return out;
}

std::vector<BumpSpec> default_bumps() {
  return {{"b0", 0, 1.0, 0}, {"b1", {0.2, 0.1}, 0.9, 0.5}, {"b2", -0.3, 1.2, kI}, {"b3", {0, 0.5}, 0.8, 0},
          {"b4", 2.0, 0.5, 0}};
}

currents::PairingQuadrature read_quadrature(Block& b) {
  currents::PairingQuadrature q;
  q.radial_order = b.integer("radial_order", q.radial_order, 4);
  q.angular = b.integer("angular", q.angular, 8);
  q.singular_order = b.integer("singular_order", q.singular_order, 4);
  q.depth = b.integer("depth", q.depth, 2);
  q.certify_rel = b.positive("certify_rel", q.certify_rel);
  return q;
}

std::vector<double> increasing(Block& b, const std::string& key, std::vector<double> def, std::size_t min_size) {
  auto v = b.reals(key, def);
  if (v.size() < min_size)
    throw ConfigError(b.path() + "." + key + ": needs at least " + std::to_string(min_size) + " values");
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0) || (i && !(v[i] > v[i - 1])))
      throw ConfigError(b.path() + "." + key + ": values must be positive and increasing");
  return v;
}

exact::GaussRational gauss_integer(cplx z, const std::string& where) {
  if (z.real() != std::round(z.real()) || z.imag() != std::round(z.imag()))
    throw ConfigError(where + ": exact routes need Gaussian integer coordinates");
  return exact::GaussRational(mpq_class(long(z.real())), mpq_class(long(z.imag())));
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s)
    if (std::isalnum(static_cast<unsigned char>(c))) out += c;
  return out.empty() ? "s" : out;
}

cplx eval1(const Expr& e, cplx z) { return e.eval(std::span<const cplx>(&z, 1)); }

// ---- poincare_lelong

Runner prepare_poincare_lelong(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  Expr s = expr(in.text("section", "z"), {"z"}, in.path() + ".section");
  std::vector<std::pair<Point, int>> zeros;
  for (auto& z : in.list("zeros")) {
    zeros.push_back({Point{z.complex("point", 0)}, int(z.integer("multiplicity", 1, 1))});
    z.finish();
  }
  if (zeros.empty()) zeros.push_back({Point{0}, 1});
  auto tests = read_bumps(in, "test_forms", default_bumps());
  double tol = nu.positive("tolerance", c.tol.log_singular);
  auto q = read_quadrature(nu);
  in.finish();
  nu.finish();
  return [=](Ctx& x) {
    std::vector<cplx> sing;
    for (const auto& [p, m] : zeros) sing.push_back(p[0]);
    auto T = currents::l1_current([s](cplx z) { return cplx(0, 1 / kPi) * std::log(std::abs(eval1(s, z))); }, sing, q,
                                  "(i/pi) log|s|");
    auto lhs = std::vector<currents::Term>{{1.0, currents::point_current(1, zeros)}};
    for (const auto& r : currents::transgression_residual(lhs, T, forms(tests)))
      x.pairing("zeros vs ddbar log|s|: " + r.test_form_id, r.lhs, r.rhs, tol, P::Paper);
    TestForm zero(1, {}, {0}, {1}, "zero");
    x.pairing("zero test form", 0, currents::ddbar_pair(T, zero), 0, P::Trivial);
  };
}

// ---- generalized_pl

Runner prepare_generalized_pl(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  auto comps = in.texts("components", {"z^2", "z^3"});
  if (comps.empty()) throw ConfigError(in.path() + ".components: empty section");
  std::vector<Expr> s;
  for (const auto& t : comps) s.push_back(expr(t, {"z"}, in.path() + ".components"));
  cone::SectionData sd = [&] {
    try {
      return cone::SectionData::parse({"z"}, comps);
    } catch (const std::exception& e) {
      throw ConfigError(in.path() + ".components: " + e.what());
    }
  }();
  long mult = in.integer("multiplicity", 2, 1);
  cplx zero = in.complex("zero", 0);
  auto gz = gauss_integer(zero, in.path() + ".zero");
  auto tests = read_bumps(in, "test_forms", default_bumps());
  double tol = nu.positive("tolerance", c.tol.extrapolation);
  auto q = read_quadrature(nu);
  in.finish();
  nu.finish();
  return [=](Ctx& x) {
    auto rep = cone::multiplicity_report(sd, {gz}, 1);
    x.exact("coefficient vs Hilbert-Samuel multiplicity", mult, rep.hs_multiplicity, P::Derived);
    x.exact("coefficient vs cone fiber degree", mult, rep.cone_fiber_degree, P::Derived);

    auto hE = geom::MetricField::identity(1, s.size());
    auto c1 = geom::chern_form(geom::section_line_dual_metric(hE, s), 1);
    auto T = currents::l1_current(
        [s](cplx z) {
          double n2 = 0;
          for (const auto& e : s) n2 += std::norm(eval1(e, z));
          return cplx(0, -1 / kPi) * 0.5 * std::log(n2);
        },
        {zero}, q, "-(i/pi) log|s|");
    std::vector<currents::Term> lhs{{-1.0, currents::form_current(c1, {1, 1}, q, {zero})},
                                    {-double(mult), currents::point_current(1, {{Point{zero}, 1}})}};
    for (const auto& r : currents::transgression_residual(lhs, T, forms(tests)))
      x.pairing("-c1(L_s*) - m delta vs ddbar T: " + r.test_form_id, r.lhs, r.rhs, tol, P::Paper);
  };
}

// ---- thom_gysin

Runner prepare_thom_gysin(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  auto tests = read_bumps(in, "test_forms", {{"c0", 0, 1.0, 0}, {"c1", 0, 1.0, {0.4, -0.2}}, {"c2", 0, 1.0, kI}});
  for (const auto& t : tests)
    if (t.center != cplx(0)) throw ConfigError(in.path() + ".test_forms: '" + t.id + "' must be centered at 0");
  auto samples = in.reals("potential_samples", {1e-6, 0.1, 0.5, 1.0, 2.0});
  for (double v : samples)
    if (!(v > 0)) throw ConfigError(in.path() + ".potential_samples: values must be positive");
  double tol = nu.positive("tolerance", c.tol.log_singular);
  double qtol = nu.positive("quadrature_tolerance", c.tol.quadrature);
  auto q = read_quadrature(nu);
  in.finish();
  nu.finish();
  return [=](Ctx& x) {
    cplx mass = geom::integrate_c1(geom::p1_dual_tautological());
    x.pairing("fiber integral of c1(tau*)", 1.0, mass, qtol, P::Derived);
    for (double v : samples) {
      cplx want = cplx(0, 1 / kPi) * (0.5 * std::log1p(v * v) - std::log(v));
      x.pairing("fiber potential at |v| = " + json(v).dump(), want, currents::point_fiber_potential(v), qtol, P::Derived);
    }
    auto model = currents::chern_model(geom::MetricField::identity(1, 1), geom::dual_tautological_metric, 1);
    auto omegaE = currents::pullback_family(model, {Expr::z(0)}, 1.0);
    auto T = currents::point_fiber_potential_current(q);
    std::vector<currents::Term> lhs{{1.0, currents::form_current(omegaE, {1, 1}, q)},
                                    {-1.0, currents::scaled(currents::point_current(1, {{Point{0}, 1}}), mass)}};
    for (const auto& r : currents::transgression_residual(lhs, T, forms(tests)))
      x.pairing("omega|E - [M] vs ddbar T: " + r.test_form_id, r.lhs, r.rhs, tol, P::Paper);
  };
}

// ---- multiplicity_localization

struct CorpusEntry {
  std::string name;
  std::vector<std::string> vars, comps;
  std::vector<exact::GaussRational> point;
  unsigned codim = 1;
  long expected = 0;
  P provenance = P::Derived;
};

P parse_provenance(const std::string& s, const std::string& where) {
  if (s == "PAPER") return P::Paper;
  if (s == "TRIVIAL") return P::Trivial;
  if (s == "DERIVED") return P::Derived;
  throw ConfigError(where + ": provenance must be PAPER, TRIVIAL or DERIVED");
}

Runner prepare_multiplicity(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  std::filesystem::path corpus = in.text("corpus", "");
  if (corpus.empty())
    corpus = std::filesystem::path(DTRANS_DATA_DIR) / "multiplicity_corpus.yaml";
  else if (corpus.is_relative())
    corpus = c.base_dir / corpus;
  long ab_max = in.integer("ab_max", 3, 1);
  in.finish();
  nu.finish();

  // read entries, including the point coordinates list
  YAML::Node root;
  try {
    root = YAML::LoadFile(corpus.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError("corpus " + corpus.string() + ": " + e.what());
  }
  Block top(root, "corpus");
  if (top.integer("schema_version", -1, -1) != kSchemaVersion) throw ConfigError("corpus.schema_version: expected 1");
  std::vector<CorpusEntry> entries;
  for (auto& e : top.list("entries")) {
    CorpusEntry ce;
    ce.name = e.text("name", "entry" + std::to_string(entries.size()));
    ce.vars = e.texts("vars", {});
    ce.comps = e.texts("components", {});
    ce.codim = e.integer("codim", 1, 1);
    ce.expected = e.integer("expected", 1, 0);
    ce.provenance = parse_provenance(e.text("provenance", "DERIVED"), e.path() + ".provenance");
    YAML::Node pt = e.raw("point");
    if (!pt || !pt.IsSequence() || pt.size() != ce.vars.size())
      throw ConfigError(e.path() + ".point: needs one coordinate per variable");
    for (std::size_t i = 0; i < pt.size(); ++i)
      ce.point.push_back(gauss_integer(parse_complex(pt[i], e.path() + ".point"), e.path() + ".point"));
    if (ce.vars.empty() || ce.comps.empty()) throw ConfigError(e.path() + ": vars and components are required");
    try {
      cone::SectionData::parse(ce.vars, ce.comps);
    } catch (const std::exception& ex) {
      throw ConfigError(e.path() + ".components: " + ex.what());
    }
    e.finish();
    entries.push_back(std::move(ce));
  }
  top.finish();
  if (entries.empty()) throw ConfigError("corpus: no entries");

  return [=](Ctx& x) {
    x.rep.observations.push_back({{"corpus", corpus.filename().string()}, {"entries", entries.size()}});
    for (const auto& e : entries) {
      auto r = cone::multiplicity_report(cone::SectionData::parse(e.vars, e.comps), e.point, e.codim);
      x.exact(e.name + ": Hilbert-Samuel multiplicity", e.expected, r.hs_multiplicity, e.provenance);
      x.exact(e.name + ": cone fiber degree", e.expected, r.cone_fiber_degree, e.provenance);
    }
    exact::GaussRational o(0);
    for (long a = 1; a <= ab_max; ++a)
      for (long b = 1; b <= ab_max; ++b) {
        auto s = cone::SectionData::parse({"x", "y"}, {"x^" + std::to_string(a), "y^" + std::to_string(b)});
        auto r = cone::multiplicity_report(s, {o, o}, 2);
        std::string n = "<x^" + std::to_string(a) + ", y^" + std::to_string(b) + ">";
        x.exact(n + ": Hilbert-Samuel multiplicity", a * b, r.hs_multiplicity, P::Derived);
        x.exact(n + ": cone fiber degree", a * b, r.cone_fiber_degree, P::Derived);
      }
  };
}

// ---- weighted_limits

Runner prepare_weighted_limits(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  auto sections = in.texts("sections", {"z", "z^2", "z^3"});
  std::vector<Expr> sx;
  for (const auto& t : sections) {
    sx.push_back(expr(t, {"z"}, in.path() + ".sections"));
    try {
      cone::SectionData::parse({"z"}, {t});
    } catch (const std::exception& e) {
      throw ConfigError(in.path() + ".sections: " + e.what());
    }
  }
  std::string fixed_text = in.text("fixed_section", "0");
  Expr fixed = expr(fixed_text, {"z"}, in.path() + ".fixed_section");
  auto eta = read_bump(in.child("test_form"), {"eta", {0.05, 0.02}, 0.9, {0.3, 0}});
  auto lambdas = increasing(in, "lambdas", {10, 31.6, 100, 316, 1000, 3160, 10000}, 4);

  Block ls = in.child("limit_set");
  auto weights = ls.integers("weights", {0, 1, 2, 3});
  auto lsec = ls.texts("section", {"1+z", "z^2", "z^5", "z^9"});
  auto grid_exp = ls.integers("grid_exponents", {8, 40});
  long phases = ls.integer("phases", 8, 1);
  long steps = ls.integer("lambda_steps", 64, 1);
  long per_decade = ls.integer("steps_per_decade", 4, 1);
  long min_points = ls.integer("min_points", 10, 1);
  ls.finish();
  if (weights.size() < 2 || lsec.size() != weights.size())
    throw ConfigError(ls.path() + ": needs at least two weights and one section component per weight");
  if (grid_exp.size() != 2 || grid_exp[0] > grid_exp[1])
    throw ConfigError(ls.path() + ".grid_exponents: expected [k_min, k_max]");
  std::vector<unsigned> w;
  for (long v : weights) {
    if (v < 0) throw ConfigError(ls.path() + ".weights: must be nonnegative");
    w.push_back(unsigned(v));
  }
  std::optional<cstar::WeightedAction> action;
  try {
    action.emplace(std::vector<unsigned>(w.size(), 1), w);
  } catch (const std::exception& e) {
    throw ConfigError(ls.path() + ".weights: " + e.what());
  }
  std::vector<Expr> lx;
  for (const auto& t : lsec) lx.push_back(expr(t, {"z"}, ls.path() + ".section"));

  double tol = nu.positive("tolerance", c.tol.extrapolation);
  double qtol = nu.positive("quadrature_tolerance", c.tol.quadrature);
  double line_tol = nu.positive("line_residual", 1e-3);
  double fit_max = nu.positive("fit_residual", 0.1);
  auto q = read_quadrature(nu);
  in.finish();
  nu.finish();

  return [=, a = *action](Ctx& x) {
    auto model = currents::chern_model(geom::MetricField::identity(1, 1), geom::dual_tautological_metric, 1);
    TestForm f = eta.form();
    double eta0 = f(Point{0})[0].real();
    auto pair = [&](const std::vector<Expr>& s, double lam) {
      return currents::form_current(currents::pullback_family(model, s, lam), {1, 1}, q, {0})(f);
    };
    cplx sinf = pair({Expr(1.0)}, 1e12);
    for (std::size_t i = 0; i < sections.size(); ++i) {
      std::string tag = "sweep " + sections[i] + ": ";
      auto r = cone::multiplicity_report(cone::SectionData::parse({"z"}, {sections[i]}), {exact::GaussRational(0)}, 1);
      x.exact(tag + "multiplicity, dual routes", r.hs_multiplicity, r.cone_fiber_degree, P::Derived);
      x.pairing(tag + "s_inf term", 0, sinf, qtol, P::Derived);
      std::vector<SweepPoint> sweep;
      for (double l : lambdas) sweep.push_back({l, pair({sx[i]}, l)});
      x.sweep_csv("sweep_" + slug(sections[i]), sweep);
      auto L = currents::weak_limit(sweep, fit_max);
      cplx want = sinf + double(r.hs_multiplicity) * eta0;
      x.check(tag + "extrapolated limit vs s_inf + m eta(0)", complex_json(want), complex_json(L.limit),
              std::abs(L.limit - want) / std::max(std::abs(want), 1e-300), tol, P::Paper);
      x.rep.observations.push_back(
          {{"sweep", sections[i]}, {"alpha", L.alpha}, {"fit_residual", L.residual}, {"note", L.note}});
    }
    std::vector<SweepPoint> flat;
    for (double l : lambdas) flat.push_back({l, pair({fixed}, l)});
    x.sweep_csv("fixed_section", flat);
    double spread = 0;
    for (const auto& p : flat) spread = std::max(spread, std::abs(p.value - flat.front().value));
    x.check("fixed section " + fixed_text + ": constant column", 0.0, spread, spread, 0, P::Trivial);

    std::vector<cplx> grid, lams;
    for (long k = grid_exp[0]; k <= grid_exp[1]; ++k)
      for (long ph = 0; ph < phases; ++ph)
        grid.push_back(std::polar(std::pow(10.0, -double(k) / 8.0), 2 * kPi * double(ph) / double(phases)));
    for (long j = 0; j <= steps; ++j) lams.push_back(std::pow(10.0, double(j) / double(per_decade)));
    auto samples = cstar::empirical_limit_set(
        a,
        [&](cplx z) {
          cstar::cvec v(lx.size());
          for (std::size_t i = 0; i < lx.size(); ++i) v(i) = eval1(lx[i], z);
          return v;
        },
        grid, lams);
    auto path = x.artifact("limit_set");
    if (x.opt.write_files) {
      std::ofstream out(path);
      cstar::write_limit_csv(out, samples);
    }
    auto cover = cstar::line_coverage(a, samples, line_tol);
    x.exact("limit set: number of lines", long(weights.size()) - 1, long(cover.size()), P::Paper);
    for (const auto& cv : cover) {
      std::string tag = "line " + std::to_string(cv.block) + "-" + std::to_string(cv.block + 1) + ": ";
      x.check(tag + "clustered points", min_points, cv.interior_points,
              double(std::max<long>(0, min_points - long(cv.interior_points))), 0, P::Paper);
      x.check(tag + "off-line residual", 0.0, cv.best_residual, cv.best_residual, line_tol, P::Derived);
    }
  };
}

// ---- cstar_closure

Runner prepare_cstar_closure(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  auto weights = in.integers("weights", {0, 1, 2, 3, 4, 5});
  long k_sym = in.integer("symbolic_k_max", 3, 1);
  long k_count = in.integer("count_k_max", 5, 1);
  long k_closure = in.integer("closure_k_max", 3, 1);
  long samples = in.integer("samples", 100, 1);
  double lambda = in.positive("lambda", 1e4);
  double tol = nu.positive("chordal_tolerance", 1e-3);
  in.finish();
  nu.finish();
  long kmax = std::max({k_sym, k_count, k_closure});
  if (long(weights.size()) < kmax + 1)
    throw ConfigError(in.path() + ".weights: needs k_max + 1 = " + std::to_string(kmax + 1) + " entries");
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (weights[i] < 0 || (i && weights[i] <= weights[i - 1]) || (i == 0 && weights[0] != 0))
      throw ConfigError(in.path() + ".weights: must start at 0 and increase");
  auto action = [weights](long k) {
    std::vector<unsigned> w(weights.begin(), weights.begin() + k + 1);
    return cstar::WeightedAction(std::vector<unsigned>(k + 1, 1), w);
  };
  return [=](Ctx& x) {
    for (long k = 1; k <= k_count; ++k) {
      auto a = action(k);
      auto sys = cstar::fundamental_equations(a);
      std::string tag = "k = " + std::to_string(k) + ": ";
      x.exact(tag + "equation systems", (k + 2) * (k + 1) / 2, long(sys.size()), P::Paper);
      if (k <= k_sym) {
        x.exact(tag + "graph substitution residuals", 0, long(cstar::graph_substitution_residuals(a, sys)), P::Paper);
        x.exact(tag + "involution symmetry", 1, cstar::symmetric_under_involution(a) ? 1 : 0, P::Trivial);
      }
      if (k <= k_closure) {
        auto r = cstar::verify_graph_closure(a, samples, x.opt.seed + k, lambda);
        x.exact(tag + "closure: symbolic nonzero", 0, long(r.symbolic_nonzero), P::Paper);
        x.check(tag + "closure: chordal distance at lambda", 0.0, r.max_distance, r.max_distance, tol, P::Derived);
      }
    }
  };
}

// ---- superconnection_transgression

geom::MetricField random_metric(std::mt19937_64& rng, std::size_t n, std::size_t r) {
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
  return geom::MetricField(n, r, h);
}

Point random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-1, 1);
  Point p;
  for (int k = 0; k < 2; ++k) {
    cplx z;
    do z = {u(rng), u(rng)};
    while (std::abs(z) > 1);
    p.push_back(radius * z);
  }
  return p;
}

Runner prepare_superconnection(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  long trials = in.integer("trials", 2, 1);
  auto lams = in.reals("lambdas", {0, 1, 10});
  long points = in.integer("points_per_trial", 2, 1);
  double radius = in.positive("disk_radius", 0.4);
  Block sw = in.child("sweep");
  auto sweep_l = increasing(sw, "lambdas", {2, 4, 8, 16, 32, 64}, 4);
  auto tests = read_bumps(sw, "test_forms", {{"e0", 0, 1.0, 0}, {"e1", {0.1, 0.05}, 0.8, {0.3, 0}}});
  sw.finish();
  double off_tol = nu.positive("offdiag_tolerance", 1e-10);
  double d_tol = nu.positive("closed_tolerance", 1e-6);
  double st_tol = nu.positive("supertrace_tolerance", 1e-12);
  double lim_tol = nu.positive("limit_tolerance", 5e-2);
  double fit_max = nu.positive("fit_residual", 0.1);
  auto q = read_quadrature(nu);
  in.finish();
  nu.finish();

  return [=](Ctx& x) {
    auto structure = [&](const std::string& tag, const geom::SuperBundleData& d, cplx lambda,
                         const std::vector<Point>& pts, P prov) {
      auto ch = geom::super_chern_character(d, lambda);
      double off = 0, dch = 0;
      for (const auto& p : pts) {
        off = std::max(off, ch(p).max_off_diagonal());
        dch = std::max(dch, geom::exterior(ch, p, geom::ExteriorOp::D).max_abs());
      }
      x.check(tag + "off-(p,p) part", 0.0, off, off, off_tol, prov);
      x.check(tag + "|d ch|", 0.0, dch, dch, d_tol, prov);
    };
    std::uniform_int_distribution<int> ci(-2, 2);
    for (long t = 0; t < trials; ++t) {
      auto hp = random_metric(x.rng, 2, 2);
      auto hm = random_metric(x.rng, 2, 1);
      std::vector<Expr> A;
      for (int k = 0; k < 2; ++k)
        A.push_back(Expr(0.5 * ci(x.rng)) + Expr(0.5 * ci(x.rng)) * Expr::z(0) +
                    Expr(cplx(0, 0.5 * ci(x.rng))) * Expr::z(1) + 0.25 * Expr::z(0) * Expr::z(1));
      geom::SuperBundleData d(hp, hm, A);
      std::vector<Point> pts;
      for (long i = 0; i < points; ++i) pts.push_back(random_point(x.rng, radius));
      for (double l : lams)
        structure("structure trial " + std::to_string(t) + ", lambda " + json(l).dump() + ": ", d, l, pts, P::Paper);
      double worst = 0;
      for (const auto& p : pts) {
        auto s = geom::super_chern_character(geom::superconnection_curvature(d, 0.0, p), d.grading(), {true, false});
        auto ordinary = [&](const geom::MetricField& h) {
          std::vector<double> even(h.rank(), 1.0);
          return geom::exp_even(-1.0 * geom::curvature(h, p), even).trace();
        };
        worst = std::max(worst, (s - (ordinary(hp) - ordinary(hm))).max_abs());
      }
      x.check("structure trial " + std::to_string(t) + ": supertrace at lambda 0", 0.0, worst, worst, st_tol, P::Paper);
    }
    // chain case: Koszul complex C -> C^2 -> C on C^2
    {
      auto hp = random_metric(x.rng, 2, 2);
      Expr Z1 = Expr::z(0), Z2 = Expr::z(1);
      geom::SuperBundleData d(hp, geom::MetricField::identity(2, 2), {Z1, Expr(), Z2, Expr()},
                              {Expr(), Expr(), Z2, -Z1});
      std::vector<Point> pts;
      for (long i = 0; i < points; ++i) pts.push_back(random_point(x.rng, radius));
      double defect = 0;
      for (const auto& p : pts) defect = std::max(defect, d.chain_defect(p));
      x.check("structure chain: AB and BA", 0.0, defect, defect, off_tol, P::Derived);
      for (double l : {1.0, 2.5}) structure("structure chain, lambda " + json(l).dump() + ": ", d, l, pts, P::Derived);
    }

    auto flat = geom::MetricField::identity(1, 1);
    geom::SuperBundleData d(flat, flat, {Expr::z(0)});
    for (const auto& spec : tests) {
      TestForm f = spec.form();
      double eta0 = f(Point{0})[0].real();
      std::vector<SweepPoint> sweep;
      for (double l : sweep_l) {
        auto ch = geom::super_chern_character(d, l);
        geom::FormField top{1, [ch](std::span<const cplx> z) { return ch(z).degree_part(2); }, ch.chart};
        sweep.push_back({l, currents::form_current(top, {1, 1}, q, {0})(f)});
      }
      x.sweep_csv("sweep_" + slug(spec.id), sweep);
      auto L = currents::weak_limit(sweep, fit_max);
      std::string tag = "sweep " + spec.id + ": ";
      x.check(tag + "decay exponent positive", "> 0", L.alpha, L.alpha > 0 ? 0.0 : 1.0, 0, P::Derived);
      x.check(tag + "fit residual", 0.0, L.residual, L.residual, fit_max, P::Derived);
      x.check(tag + "limit vs eta(0)", complex_json(eta0), complex_json(L.limit), std::abs(L.limit - eta0), lim_tol,
              P::Paper);
      x.rep.observations.push_back({{"sweep", spec.id}, {"alpha", L.alpha}, {"note", L.note}});
    }
  };
}

// ---- correspondence_algebra

grass::cmat random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> g;
  grass::cmat m(r, c);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

grass::Subspace random_subspace(std::mt19937_64& rng, grass::HermSpace s, std::size_t k) {
  grass::cmat m = random_matrix(rng, s.dim(), k);
  std::uniform_int_distribution<int> pick(0, 3);
  std::size_t inE = 0, inF = 0;
  for (std::size_t j = 0; j < k; ++j) {
    int c = pick(rng);
    if (c == 0 && inE < s.pE) {
      m.col(j).bottomRows(s.pF).setZero();
      ++inE;
    }
    if (c == 1 && inF < s.pF) {
      m.col(j).topRows(s.pE).setZero();
      ++inF;
    }
  }
  return grass::Subspace(s, m, k);
}

Runner prepare_correspondence(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  long cases = in.integer("cases", 200, 1);
  long degenerate = in.integer("degenerate_cases", 300, 1);
  long max_dim = in.integer("max_dim", 3, 1);
  long probes = in.integer("associativity_probes", 50, 0);
  double tol = nu.positive("distance_tolerance", 1e-10);
  double mtol = nu.positive("metric_tolerance", 1e-9);
  in.finish();
  nu.finish();
  return [=](Ctx& x) {
    using namespace grass;
    auto& rng = x.rng;
    auto dims = [&](long t) { return std::pair<std::size_t, std::size_t>(1 + t % max_dim, 1 + (t / max_dim) % max_dim); };
    double star_d = 0, comm_d = 0, neutral_d = 0;
    long star_ok = 0;
    for (long t = 0; t < cases; ++t) {
      auto [p, q] = dims(t);
      cmat X = random_matrix(rng, q, p), Y = random_matrix(rng, q, p);
      auto L1 = graph(X), L2 = graph(Y);
      auto r = star(L1, L2);
      double d = distance(r, graph(X + Y));
      star_d = std::max(star_d, d);
      star_ok += d < tol;
      comm_d = std::max(comm_d, distance(r, star(L2, L1)));
      neutral_d = std::max(neutral_d, distance(star(L1, Subspace::E(L1.ambient())), L1));
    }
    x.check("star = addition: max distance", 0.0, star_d, star_d, tol, P::Paper);
    x.exact("star = addition: cases within tolerance", cases, star_ok, P::Derived);
    x.check("star commutativity", 0.0, comm_d, comm_d, tol, P::Derived);

    double dia_d = 0;
    long dia_ok = 0;
    for (long t = 0; t < cases; ++t) {
      auto [p, q] = dims(t);
      cmat A = random_matrix(rng, q, p), B = random_matrix(rng, p, q);
      double d = distance(diamond(graph(A), cograph(B)), graph(A + B.adjoint()));
      dia_d = std::max(dia_d, d);
      dia_ok += d < tol;
      neutral_d = std::max(neutral_d, distance(diamond(graph(A), cograph(cmat::Zero(p, q))), graph(A)));
    }
    x.check("diamond = A + B*: max distance", 0.0, dia_d, dia_d, tol, P::Paper);
    x.exact("diamond = A + B*: cases within tolerance", cases, dia_ok, P::Derived);
    x.check("neutral elements E and F", 0.0, neutral_d, neutral_d, tol, P::Derived);

    HermSpace p1{1, 1};
    auto inf = Subspace::F(p1);
    auto dom = star_domain(inf, inf);
    long threw = 0;
    try {
      star(inf, inf);
    } catch (const DomainError&) {
      threw = 1;
    }
    x.exact("P^1: infinity * infinity outside the domain", 1, (!dom.ok && dom.witness.norm() > 0.5) ? 1 : 0,
            P::Trivial);
    x.exact("P^1: star raises a domain error", 1, threw, P::Trivial);

    double metric_d = 0;
    long domain_mismatch = 0, defined = 0;
    for (long t = 0; t < degenerate; ++t) {
      auto [p, q] = dims(t);
      HermSpace s{p, q};
      auto L1 = random_subspace(rng, s, p), L2 = random_subspace(rng, s, p);
      Metric H{cmat::Zero(s.dim(), s.dim())};
      cmat a = random_matrix(rng, p, p), b = random_matrix(rng, q, q);
      H.H.topLeftCorner(p, p) = cmat::Identity(p, p) + a * a.adjoint();
      H.H.bottomRightCorner(q, q) = cmat::Identity(q, q) + b * b.adjoint();
      bool ok = star_domain(L1, L2).ok;
      domain_mismatch += ok != star_domain(L1, L2, &H).ok;
      if (!ok) continue;
      ++defined;
      metric_d = std::max(metric_d, distance(star(L1, L2), star(L1, L2, &H)));
    }
    x.check("metric independence of star", 0.0, metric_d, metric_d, mtol, P::Paper);
    x.exact("metric independence of the domain", 0, domain_mismatch, P::Derived);

    long assoc_defined = 0;
    double assoc_max = 0;
    for (long t = 0; t < probes; ++t) {
      auto [p, q] = dims(t);
      HermSpace s{p, q};
      auto d = star_associativity_defect(random_subspace(rng, s, p), random_subspace(rng, s, p),
                                         random_subspace(rng, s, p));
      if (!d) continue;
      ++assoc_defined;
      assoc_max = std::max(assoc_max, *d);
    }
    x.rep.observations.push_back({{"star_defined_on_degenerate_pairs", defined},
                                  {"associativity_probes", probes},
                                  {"associativity_defined", assoc_defined},
                                  {"associativity_max_defect", assoc_max}});
  };
}

// ---- metric_invariance

Runner prepare_metric_invariance(const ScenarioConfig& c) {
  Block in(c.input, c.name + ".input"), nu(c.numeric, c.name + ".numeric");
  double eps = in.positive("eps", 0.3);
  geom::DiskQuadrature dq;
  dq.radial_order = nu.integer("radial_order", 32, 4);
  dq.angular = nu.integer("angular", 64, 8);
  double tol = nu.positive("tolerance", c.tol.quadrature);
  in.finish();
  nu.finish();
  return [=](Ctx& x) {
    auto atlas = geom::p1_dual_tautological();
    x.pairing("degree: integral of c1(tau*)", 1.0, geom::integrate_c1(atlas, dq), tol, P::Derived);
    int k = 0;
    for (const auto& [f0, f1] : geom::p1_perturbations(eps))
      x.pairing("perturbation " + std::to_string(k++) + ": integral of c1", 1.0,
                geom::integrate_c1(geom::conformal(atlas, f0, f1), dq), tol, P::Paper);
  };
}

struct Entry {
  std::string name;
  Runner (*prepare)(const ScenarioConfig&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{{"poincare_lelong", prepare_poincare_lelong},
                                    {"generalized_pl", prepare_generalized_pl},
                                    {"thom_gysin", prepare_thom_gysin},
                                    {"multiplicity_localization", prepare_multiplicity},
                                    {"weighted_limits", prepare_weighted_limits},
                                    {"cstar_closure", prepare_cstar_closure},
                                    {"superconnection_transgression", prepare_superconnection},
                                    {"correspondence_algebra", prepare_correspondence},
                                    {"metric_invariance", prepare_metric_invariance}};
  return r;
}

const Entry& find(const std::string& name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw ConfigError("unknown scenario '" + name + "'");
}

}  // namespace

const std::vector<std::string>& list_scenarios() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& e : registry()) n.push_back(e.name);
    return n;
  }();
  return names;
}

bool known_scenario(const std::string& name) {
  const auto& n = list_scenarios();
  return std::find(n.begin(), n.end(), name) != n.end();
}

void validate(const ScenarioConfig& cfg) { find(cfg.name).prepare(cfg); }

Report run_scenario(const ScenarioConfig& cfg, const RunOptions& opt, bool timestamp) {
  Runner run = find(cfg.name).prepare(cfg);
  Report rep;
  rep.scenario = cfg.name;
  rep.seed = opt.seed;
  rep.tol_scale = opt.tol_scale;
  if (opt.write_files) std::filesystem::create_directories(cfg.out_dir);
  Ctx x{rep, cfg, opt, std::mt19937_64(opt.seed)};
  auto t0 = std::chrono::steady_clock::now();
  try {
    run(x);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    rep.error = e.what();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (opt.write_files) {
    std::ofstream out(cfg.out_dir / (cfg.name + ".json"));
    if (!out) throw std::runtime_error("cannot write report to " + cfg.out_dir.string());
    out << rep.to_json(timestamp).dump(2) << '\n';
  }
  return rep;
}

}  // namespace dtrans::verify
