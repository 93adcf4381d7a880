#include "dtrans/exact/ideal.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dtrans::exact {

Ideal::Ideal(VarList vars, std::vector<Polynomial> generators)
    : vars_(std::move(vars)), cache_(std::make_shared<Cache>()) {
  for (auto& g : generators) {
    if (!same_vars(g.vars(), vars_)) throw std::invalid_argument("ideal generator variable-set mismatch");
    if (!g.is_zero()) gens_.push_back(std::move(g));
  }
}

Ideal Ideal::unit(VarList vars) {
  auto one = Polynomial::constant(vars, 1);
  return Ideal(std::move(vars), {one});
}

Ideal Ideal::maximal_power(VarList vars, unsigned n) {
  std::vector<Polynomial> gens;
  Exponents e(vars->size(), 0);
  if (vars->empty()) return n == 0 ? unit(vars) : zero(vars);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
    if (i + 1 == e.size()) {
      e[i] = left;
      gens.push_back(Polynomial::monomial(vars, e));
      return;
    }
    for (unsigned k = 0; k <= left; ++k) {
      e[i] = k;
      rec(i + 1, left - k);
    }
    e[i] = 0;
  };
  rec(0, n);
  return Ideal(std::move(vars), std::move(gens));
}

const std::vector<Polynomial>& Ideal::basis(const MonomialOrder& order) const {
  const std::string key = order.key();
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->bases.find(key);
    if (it != cache_->bases.end()) return *it->second;
  }
  auto computed = std::make_shared<const std::vector<Polynomial>>(groebner(gens_, order));
  std::lock_guard lock(cache_->mu);
  // first writer wins; later ones discard their identical result
  auto [it, inserted] = cache_->bases.emplace(key, std::move(computed));
  return *it->second;
}

Polynomial Ideal::reduce(const Polynomial& f, const MonomialOrder& order) const {
  return normal_form(f, basis(order), order);
}

bool Ideal::contains(const Polynomial& f) const { return reduce(f).is_zero(); }

bool Ideal::contains(const Ideal& other) const {
  return std::all_of(other.gens_.begin(), other.gens_.end(), [&](const Polynomial& g) { return contains(g); });
}

bool Ideal::is_unit() const {
  const auto& b = basis(MonomialOrder::grevlex());
  return b.size() == 1 && b.front().is_constant();
}

bool Ideal::is_zero() const { return gens_.empty(); }

Ideal Ideal::operator+(const Ideal& o) const {
  if (!same_vars(vars_, o.vars_)) throw std::invalid_argument("ideal variable-set mismatch");
  auto g = gens_;
  g.insert(g.end(), o.gens_.begin(), o.gens_.end());
  return Ideal(vars_, std::move(g));
}

Ideal Ideal::operator*(const Ideal& o) const {
  if (!same_vars(vars_, o.vars_)) throw std::invalid_argument("ideal variable-set mismatch");
  std::vector<Polynomial> g;
  for (const auto& a : gens_)
    for (const auto& b : o.gens_) g.push_back(a * b);
  return Ideal(vars_, std::move(g));
}

Ideal Ideal::pow(unsigned n) const {
  Ideal r = unit(vars_);
  for (unsigned k = 0; k < n; ++k) r = r * *this;
  return r;
}

Ideal Ideal::embed(const VarList& target) const {
  std::vector<Polynomial> g;
  for (const auto& p : gens_) g.push_back(p.embed(target));
  return Ideal(target, std::move(g));
}

std::string Ideal::str() const {
  std::string s = "<";
  for (std::size_t k = 0; k < gens_.size(); ++k) s += (k ? ", " : "") + gens_[k].str();
  return s + ">";
}

Ideal eliminate(const Ideal& ideal, const std::vector<std::string>& drop_vars) {
  const auto& names = *ideal.vars();
  for (const auto& d : drop_vars)
    if (std::find(names.begin(), names.end(), d) == names.end())
      throw std::invalid_argument("eliminate: unknown variable '" + d + "'");
  if (drop_vars.empty()) return ideal;
  std::vector<std::string> rest, ordered = drop_vars;
  for (const auto& n : names)
    if (std::find(drop_vars.begin(), drop_vars.end(), n) == drop_vars.end()) rest.push_back(n);
  ordered.insert(ordered.end(), rest.begin(), rest.end());
  VarList big = make_vars(ordered);
  VarList small = make_vars(rest);
  Ideal work = ideal.embed(big);
  const auto& b = work.basis(MonomialOrder::block_elimination(drop_vars.size()));
  std::vector<Polynomial> kept;
  for (const auto& g : b) {
    bool free = true;
    for (std::size_t k = 0; k < drop_vars.size(); ++k) free = free && !g.involves(k);
    if (free) kept.push_back(g.embed(small));
  }
  return Ideal(small, std::move(kept));
}

namespace {

std::string fresh_name(const VarList& vars, const std::string& base) {
  std::string name = base;
  while (std::find(vars->begin(), vars->end(), name) != vars->end()) name += "_";
  return name;
}

VarList with_front(const VarList& vars, const std::string& name) {
  std::vector<std::string> v{name};
  v.insert(v.end(), vars->begin(), vars->end());
  return make_vars(v);
}

}  // namespace

Ideal intersect(const Ideal& a, const Ideal& b) {
  if (!same_vars(a.vars(), b.vars())) throw std::invalid_argument("ideal variable-set mismatch");
  std::string t = fresh_name(a.vars(), "_t");
  VarList big = with_front(a.vars(), t);
  Polynomial tp = Polynomial::variable(big, 0);
  Polynomial one_minus_t = Polynomial::constant(big, 1) - tp;
  std::vector<Polynomial> g;
  for (const auto& p : a.generators()) g.push_back(tp * p.embed(big));
  for (const auto& p : b.generators()) g.push_back(one_minus_t * p.embed(big));
  Ideal r = eliminate(Ideal(big, std::move(g)), {t});
  return Ideal(a.vars(), [&] {
    std::vector<Polynomial> out;
    for (const auto& p : r.generators()) out.push_back(p.embed(a.vars()));
    return out;
  }());
}

Ideal quotient(const Ideal& ideal, const Polynomial& f) {
  if (f.is_zero()) return Ideal::unit(ideal.vars());
  Ideal meet = intersect(ideal, Ideal(ideal.vars(), {f}));
  std::vector<Polynomial> g;
  for (const auto& p : meet.generators()) g.push_back(exact_divide(p, f));
  return Ideal(ideal.vars(), std::move(g));
}

Ideal saturate(const Ideal& ideal, const Polynomial& f, const SaturationLimits& limits) {
  if (f.is_zero()) throw std::invalid_argument("saturate by zero polynomial");
  if (!same_vars(ideal.vars(), f.vars())) throw std::invalid_argument("ideal variable-set mismatch");
  Ideal current = ideal;
  for (unsigned round = 0; round < limits.max_rounds; ++round) {
    std::string w = fresh_name(ideal.vars(), "_w");
    VarList big = with_front(ideal.vars(), w);
    std::vector<Polynomial> g;
    for (const auto& p : current.generators()) g.push_back(p.embed(big));
    g.push_back(Polynomial::variable(big, 0) * f.embed(big) - Polynomial::constant(big, 1));
    Ideal r = eliminate(Ideal(big, std::move(g)), {w});
    std::vector<Polynomial> gens;
    for (const auto& p : r.generators()) {
      if (p.total_degree() > limits.max_degree) throw std::runtime_error("saturation degree cap exceeded");
      gens.push_back(p.embed(ideal.vars()));
    }
    Ideal next(ideal.vars(), std::move(gens));
    // stabilization: (J : f) == J
    if (next.is_unit() || quotient(next, f) == next) return next;
    current = std::move(next);
  }
  throw std::runtime_error("saturation did not stabilize within the round cap");
}

Ideal saturate(const Ideal& ideal, const Ideal& by, const SaturationLimits& limits) {
  if (by.generators().empty()) return ideal;
  std::optional<Ideal> acc;
  for (const auto& f : by.generators()) {
    Ideal s = saturate(ideal, f, limits);
    acc = acc ? intersect(*acc, s) : s;
  }
  return *acc;
}

std::optional<std::uint64_t> colength(const Ideal& ideal) {
  const auto order = MonomialOrder::grevlex();
  const auto& b = ideal.basis(order);
  const std::size_t n = ideal.vars()->size();
  if (b.empty()) return n == 0 ? std::optional<std::uint64_t>(1) : std::nullopt;
  if (b.size() == 1 && b.front().is_constant()) return 0;
  std::vector<Exponents> leads;
  for (const auto& g : b) leads.push_back(g.leading_exponents(order));
  std::vector<std::uint32_t> bound(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& e : leads) {
      bool pure = e[v] > 0;
      for (std::size_t u = 0; u < n && pure; ++u) pure = u == v || e[u] == 0;
      if (pure && (bound[v] == 0 || e[v] < bound[v])) bound[v] = e[v];
    }
    if (bound[v] == 0) return std::nullopt;
  }
  auto reducible = [&](const Exponents& m) {
    return std::any_of(leads.begin(), leads.end(), [&](const Exponents& l) { return divides(l, m); });
  };
  std::uint64_t count = 0;
  Exponents e(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t v) {
    for (std::uint32_t k = 0; k < bound[v]; ++k) {
      e[v] = k;
      if (reducible(e)) break;
      if (v + 1 == n)
        ++count;
      else
        rec(v + 1);
    }
    e[v] = 0;
  };
  if (n == 0) return 1;
  rec(0);
  return count;
}

}  // namespace dtrans::exact

namespace dtrans::exact {

int krull_dimension(const Ideal& ideal) {
  const auto order = MonomialOrder::grevlex();
  const auto& b = ideal.basis(order);
  const std::size_t n = ideal.vars()->size();
  if (b.size() == 1 && b.front().is_constant()) return -1;
  std::vector<Exponents> leads;
  for (const auto& g : b) leads.push_back(g.leading_exponents(order));
  // largest set of variables containing no leading monomial's support
  int best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
    int size = __builtin_popcountll(mask);
    if (size <= best) continue;
    bool independent = std::none_of(leads.begin(), leads.end(), [&](const Exponents& l) {
      for (std::size_t v = 0; v < n; ++v)
        if (l[v] && !(mask >> v & 1)) return false;
      return true;
    });
    if (independent) best = size;
  }
  return best;
}

}  // namespace dtrans::exact
