#include "dtrans/cone/cone.hpp"

#include <algorithm>
#include <functional>
#include <random>

namespace dtrans::cone {

using exact::Exponents;
using exact::MonomialOrder;
using exact::make_vars;

SectionData::SectionData(VarList vars, std::vector<Polynomial> comps)
    : base_vars(std::move(vars)), components(std::move(comps)) {
  if (components.empty()) throw std::invalid_argument("section needs at least one component");
  bool all_zero = true;
  for (const auto& c : components) {
    if (!exact::same_vars(c.vars(), base_vars)) throw std::invalid_argument("section component variable mismatch");
    all_zero = all_zero && c.is_zero();
  }
  if (all_zero) throw std::invalid_argument("section is identically zero");
}

SectionData SectionData::parse(const std::vector<std::string>& vars, const std::vector<std::string>& comps) {
  VarList v = make_vars(vars);
  std::vector<Polynomial> ps;
  for (const auto& c : comps) ps.push_back(exact::parse_polynomial(c, v));
  return SectionData(v, std::move(ps));
}

namespace {

std::string fresh(const std::vector<std::string>& taken, std::string name) {
  while (std::find(taken.begin(), taken.end(), name) != taken.end()) name += "_";
  return name;
}

std::vector<std::string> fiber_names(const VarList& base, std::size_t k, bool with_theta) {
  std::vector<std::string> out;
  if (with_theta) out.push_back(fresh(*base, "theta"));
  for (std::size_t i = 1; i <= k; ++i) out.push_back(fresh(*base, "w" + std::to_string(i)));
  return out;
}

// Linear slice x = p + sum_j u_j b_j through p, of dimension d. When d equals
// the number of base variables the slice is a pure translation.
struct Slice {
  VarList vars;                     // u_1..u_d followed by `extra`
  std::vector<Polynomial> images;   // one per base variable
};

Slice make_slice(const VarList& base, const std::vector<GaussRational>& p, unsigned d,
                 const std::vector<std::string>& extra, std::uint64_t seed) {
  const std::size_t n = base->size();
  if (p.size() != n) throw std::invalid_argument("point dimension mismatch");
  if (d == 0 || d > n) throw std::invalid_argument("codimension must lie in 1..number of variables");
  std::vector<std::string> names;
  if (d == n) {
    names = *base;
  } else {
    for (unsigned j = 1; j <= d; ++j) names.push_back(fresh(extra, "u" + std::to_string(j)));
  }
  names.insert(names.end(), extra.begin(), extra.end());
  VarList vars = make_vars(names);

  std::vector<std::vector<long>> b(d, std::vector<long>(n, 0));
  if (d == n) {
    for (unsigned j = 0; j < d; ++j) b[j][j] = 1;
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dist(-3, 3);
    for (auto& row : b)
      for (auto& x : row) x = dist(rng);
  }
  Slice s{vars, {}};
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial img = Polynomial::constant(vars, p[i]);
    for (unsigned j = 0; j < d; ++j)
      if (b[j][i]) img += Polynomial::variable(vars, j) * GaussRational(b[j][i]);
    s.images.push_back(std::move(img));
  }
  for (std::size_t e = 0; e < extra.size(); ++e) s.images.push_back(Polynomial::variable(vars, d + e));
  return s;
}

Ideal slice_ideal(const Ideal& I, const Slice& s) {
  std::vector<Polynomial> g;
  for (const auto& p : I.generators()) g.push_back(p.substitute(s.images));
  return Ideal(s.vars, std::move(g));
}

// m^n in the first `count` variables of `vars`.
Ideal maximal_power_prefix(const VarList& vars, std::size_t count, unsigned n) {
  std::vector<Polynomial> gens;
  Exponents e(vars->size(), 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == count) {
      e[i] = left;
      gens.push_back(Polynomial::monomial(vars, e));
      e[i] = 0;
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(0, n);
  return Ideal(vars, std::move(gens));
}

void require_vanishing(const Ideal& I, const std::vector<GaussRational>& p) {
  for (const auto& g : I.generators())
    if (!g.evaluate(p).is_zero()) throw MultiplicityError("point does not lie on the zero set");
}

// Returns the common value of the d-th differences once `window` consecutive
// ones agree; H is extended by `next` on demand.
std::int64_t stable_difference(const std::function<std::int64_t(unsigned)>& next, unsigned d, unsigned t_max,
                               unsigned window, const char* what) {
  std::vector<std::int64_t> H;
  std::vector<std::int64_t> diffs;
  for (unsigned t = 0; t <= t_max; ++t) {
    H.push_back(next(t));
    if (H.size() <= d) continue;
    // d-th backward difference at t
    std::vector<std::int64_t> row(H.end() - (d + 1), H.end());
    for (unsigned k = 0; k < d; ++k)
      for (std::size_t i = 0; i + 1 < row.size() - k; ++i) row[i] = row[i + 1] - row[i];
    diffs.push_back(row.front());
    if (diffs.size() >= window &&
        std::all_of(diffs.end() - window, diffs.end(), [&](std::int64_t v) { return v == diffs.back(); }))
      return diffs.back();
  }
  throw MultiplicityError(std::string(what) + ": Hilbert function did not stabilize within t_max");
}

}  // namespace

unsigned local_order_bound(const Ideal& I, unsigned max_order) {
  std::optional<std::uint64_t> prev;
  for (unsigned a = 1; a <= max_order + 1; ++a) {
    auto c = exact::colength(I + Ideal::maximal_power(I.vars(), a));
    if (prev && c == prev) return a - 1;
    prev = c;
  }
  throw MultiplicityError("infinite colength: ideal is not primary to the point (codimension mismatch)");
}

ConeIdeal rees_ideal(const SectionData& s) {
  const std::size_t k = s.components.size();
  auto fiber = fiber_names(s.base_vars, k, false);
  std::vector<std::string> names{fresh(*s.base_vars, "t")};
  for (const auto& f : fiber)
    if (f == names.front()) names.front() += "_";
  names.insert(names.end(), s.base_vars->begin(), s.base_vars->end());
  names.insert(names.end(), fiber.begin(), fiber.end());
  VarList big = make_vars(names);
  Polynomial t = Polynomial::variable(big, 0);
  std::vector<Polynomial> g;
  for (std::size_t i = 0; i < k; ++i)
    g.push_back(Polynomial::variable(big, fiber[i]) - t * s.components[i].embed(big));
  Ideal graph = exact::eliminate(Ideal(big, std::move(g)), {names.front()});

  std::vector<Polynomial> irrelevant;
  for (const auto& f : fiber) irrelevant.push_back(Polynomial::variable(graph.vars(), f));
  Ideal closure = exact::saturate(graph, Ideal(graph.vars(), irrelevant));
  std::vector<Polynomial> gens = closure.basis(MonomialOrder::grevlex());
  return {s.base_vars, fiber, Ideal(graph.vars(), std::move(gens))};
}

ConeIdeal normal_cone_ideal(const SectionData& s) {
  ConeIdeal rees = rees_ideal(s);
  auto fiber = fiber_names(s.base_vars, s.components.size(), true);
  std::vector<std::string> names = *s.base_vars;
  names.insert(names.end(), fiber.begin(), fiber.end());
  VarList vars = make_vars(names);
  std::vector<Polynomial> g;
  for (const auto& p : rees.ideal.generators()) g.push_back(p.embed(vars));
  for (const auto& c : s.components) g.push_back(c.embed(vars));
  return {s.base_vars, fiber, Ideal(vars, std::move(g))};
}

std::int64_t hilbert_samuel_multiplicity(const Ideal& I, const std::vector<GaussRational>& center, unsigned d,
                                         const MultiplicityOptions& opt) {
  require_vanishing(I, center);
  Slice s = make_slice(I.vars(), center, d, {}, opt.slice_seed);
  Ideal IS = slice_ideal(I, s);
  const unsigned a = local_order_bound(IS, opt.max_local_order);
  Ideal power = Ideal::unit(IS.vars());
  auto H = [&](unsigned t) -> std::int64_t {
    if (t == 0) return 0;
    power = power * IS;
    auto c = exact::colength(power + Ideal::maximal_power(IS.vars(), a * t));
    return static_cast<std::int64_t>(*c);
  };
  std::int64_t e = stable_difference(H, d, opt.t_max, opt.stable_window, "Hilbert-Samuel");
  if (e <= 0) throw MultiplicityError("non-positive Samuel multiplicity");
  return e;
}

std::int64_t generic_fiber_degree(const ConeIdeal& cone, const std::vector<GaussRational>& p, unsigned d,
                                  const MultiplicityOptions& opt) {
  const std::size_t n = cone.base_vars->size();
  const std::size_t f = cone.fiber_vars.size();
  if (p.size() != n) throw std::invalid_argument("point dimension mismatch");

  // fiber over p taken literally: its dimension bounds the generic one
  {
    VarList fv = make_vars(cone.fiber_vars);
    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < n; ++i) images.push_back(Polynomial::constant(fv, p[i]));
    for (std::size_t j = 0; j < f; ++j) images.push_back(Polynomial::variable(fv, j));
    std::vector<Polynomial> g;
    for (const auto& q : cone.ideal.generators()) g.push_back(q.substitute(images));
    int dim = exact::krull_dimension(Ideal(fv, std::move(g)));
    if (dim < 0) throw MultiplicityError("point is not on the cone's base");
    if (dim - 1 > static_cast<int>(d))
      throw MultiplicityError("non-generic point: fiber dimension " + std::to_string(dim - 1) + " exceeds expected " +
                              std::to_string(d));
  }

  Ideal base = exact::eliminate(cone.ideal, cone.fiber_vars);
  require_vanishing(base, p);
  Slice s = make_slice(cone.base_vars, p, d, cone.fiber_vars, opt.slice_seed);
  Slice sb = make_slice(cone.base_vars, p, d, {}, opt.slice_seed);
  const unsigned a = local_order_bound(slice_ideal(base, sb), opt.max_local_order);

  Ideal J = slice_ideal(cone.ideal, s) + maximal_power_prefix(s.vars, d, a);
  std::vector<std::uint32_t> weights(d, 0);
  weights.resize(d + f, 1);
  auto order = MonomialOrder::weighted(weights);
  const auto& basis = J.basis(order);
  if (basis.size() == 1 && basis.front().is_constant()) throw MultiplicityError("empty fiber");
  std::vector<Exponents> leads;
  for (const auto& g : basis) leads.push_back(g.leading_exponents(order));
  auto standard = [&](const Exponents& m) {
    return std::none_of(leads.begin(), leads.end(), [&](const Exponents& l) { return exact::divides(l, m); });
  };

  auto H = [&](unsigned t) -> std::int64_t {
    std::int64_t count = 0;
    Exponents e(d + f, 0);
    // base exponents with total degree < a, fiber exponents of total degree t
    std::function<void(std::size_t, unsigned)> fib = [&](std::size_t i, unsigned left) {
      if (i + 1 == d + f) {
        e[i] = left;
        if (standard(e)) ++count;
        e[i] = 0;
        return;
      }
      for (unsigned k = 0; k <= left; ++k) {
        e[i] = k;
        fib(i + 1, left - k);
      }
      e[i] = 0;
    };
    std::function<void(std::size_t, unsigned)> bas = [&](std::size_t i, unsigned left) {
      if (i == d) {
        fib(d, t);
        return;
      }
      for (unsigned k = 0; k <= left; ++k) {
        e[i] = k;
        bas(i + 1, left - k);
      }
      e[i] = 0;
    };
    bas(0, a - 1);
    return count;
  };
  std::int64_t deg = stable_difference(H, d, opt.t_max, opt.stable_window, "cone fiber");
  if (deg <= 0) throw MultiplicityError("cone fiber has dimension below the expected one");
  return deg;
}

MultiplicityReport multiplicity_report(const SectionData& s, const std::vector<GaussRational>& p, unsigned d,
                                       const MultiplicityOptions& opt) {
  MultiplicityReport r;
  r.point = p;
  r.hs_multiplicity = hilbert_samuel_multiplicity(s.ideal(), p, d, opt);
  r.cone_fiber_degree = generic_fiber_degree(normal_cone_ideal(s), p, d, opt);
  r.agree = r.hs_multiplicity == r.cone_fiber_degree;
  return r;
}

}  // namespace dtrans::cone
