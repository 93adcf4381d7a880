#include "dtrans/exact/groebner.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace dtrans::exact {

namespace {

struct Term {
  Exponents e;
  GaussRational c;
};

// Terms sorted by strictly decreasing monomial.
using Sorted = std::vector<Term>;

Sorted to_sorted(const Polynomial& p, const MonomialOrder& order) {
  Sorted s;
  s.reserve(p.terms().size());
  for (const auto& [e, c] : p.terms()) s.push_back({e, c});
  std::sort(s.begin(), s.end(), [&](const Term& a, const Term& b) { return order.compare(a.e, b.e) > 0; });
  return s;
}

Polynomial from_sorted(const VarList& vars, const Sorted& s) {
  Polynomial::TermMap m;
  for (const auto& t : s) m.emplace(t.e, t.c);
  return Polynomial(vars, std::move(m));
}

// a[from..] - c * x^shift * b
Sorted sub_scaled(const Sorted& a, std::size_t from, const GaussRational& c, const Exponents& shift, const Sorted& b,
                  const MonomialOrder& order) {
  Sorted out;
  out.reserve(a.size() - from + b.size());
  std::size_t i = from, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j < b.size()) {
      Exponents be = exp_mul(b[j].e, shift);
      int cmp = i < a.size() ? order.compare(a[i].e, be) : -1;
      if (cmp < 0) {
        out.push_back({std::move(be), -(c * b[j].c)});
        ++j;
      } else if (cmp > 0) {
        out.push_back(a[i]);
        ++i;
      } else {
        GaussRational v = a[i].c - c * b[j].c;
        if (!v.is_zero()) out.push_back({std::move(be), std::move(v)});
        ++i;
        ++j;
      }
    } else {
      out.push_back(a[i]);
      ++i;
    }
  }
  return out;
}

void make_monic(Sorted& s) {
  if (s.empty() || s.front().c.is_one()) return;
  GaussRational inv = s.front().c.inverse();
  for (auto& t : s) t.c *= inv;
}

// Full reduction; `skip` excludes one basis index (used by interreduction).
Sorted reduce(Sorted p, const std::vector<Sorted>& basis, const MonomialOrder& order,
              std::size_t skip = static_cast<std::size_t>(-1)) {
  Sorted rem;
  std::size_t head = 0;
  while (head < p.size()) {
    const Term& lt = p[head];
    std::size_t k = 0;
    for (; k < basis.size(); ++k)
      if (k != skip && !basis[k].empty() && divides(basis[k].front().e, lt.e)) break;
    if (k == basis.size()) {
      rem.push_back(lt);
      ++head;
      continue;
    }
    const Sorted& g = basis[k];
    GaussRational c = lt.c / g.front().c;
    Exponents shift = exp_div(lt.e, g.front().e);
    p = sub_scaled(p, head, c, shift, g, order);
    head = 0;
  }
  return rem;
}

Sorted spoly(const Sorted& f, const Sorted& g, const MonomialOrder& order) {
  Exponents l = exp_lcm(f.front().e, g.front().e);
  Sorted a = sub_scaled(Sorted{}, 0, GaussRational(-1) / f.front().c, exp_div(l, f.front().e), f, order);
  return sub_scaled(a, 0, GaussRational(1) / g.front().c, exp_div(l, g.front().e), g, order);
}

void check_vars(const std::vector<Polynomial>& ps, const VarList& vars) {
  for (const auto& p : ps)
    if (!same_vars(p.vars(), vars)) throw std::invalid_argument("polynomial variable-set mismatch");
}

}  // namespace

Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& basis, const MonomialOrder& order) {
  check_vars(basis, f.vars());
  std::vector<Sorted> b;
  for (const auto& g : basis) {
    if (g.is_zero()) throw std::invalid_argument("normal_form: zero basis element");
    b.push_back(to_sorted(g, order));
  }
  return from_sorted(f.vars(), reduce(to_sorted(f, order), b, order));
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order) {
  if (f.is_zero() || g.is_zero()) throw std::invalid_argument("s_polynomial of zero");
  if (!same_vars(f.vars(), g.vars())) throw std::invalid_argument("polynomial variable-set mismatch");
  return from_sorted(f.vars(), spoly(to_sorted(f, order), to_sorted(g, order), order));
}

std::vector<Polynomial> groebner(const std::vector<Polynomial>& gens, const MonomialOrder& order) {
  if (gens.empty()) return {};
  const VarList& vars = gens.front().vars();
  check_vars(gens, vars);

  std::vector<Sorted> G;
  struct Pair {
    std::uint64_t deg;
    std::size_t i, j;
    bool operator<(const Pair& o) const {
      return std::tie(deg, j, i) < std::tie(o.deg, o.j, o.i);
    }
  };
  std::set<Pair> queue;
  std::set<std::pair<std::size_t, std::size_t>> pending;
  bool unit = false;

  auto add = [&](Sorted h) {
    make_monic(h);
    if (total_degree(h.front().e) == 0) unit = true;
    std::size_t n = G.size();
    G.push_back(std::move(h));
    for (std::size_t i = 0; i < n; ++i) {
      if (G[i].empty()) continue;
      queue.insert({total_degree(exp_lcm(G[i].front().e, G[n].front().e)), i, n});
      pending.insert({i, n});
    }
  };

  // sort inputs by leading monomial so small elements reduce the rest first
  std::vector<Sorted> inputs;
  for (const auto& g : gens)
    if (!g.is_zero()) inputs.push_back(to_sorted(g, order));
  std::sort(inputs.begin(), inputs.end(),
            [&](const Sorted& a, const Sorted& b) { return order.compare(a.front().e, b.front().e) < 0; });
  for (auto& g : inputs) {
    Sorted h = reduce(std::move(g), G, order);
    if (!h.empty()) add(std::move(h));
    if (unit) break;
  }

  while (!unit && !queue.empty()) {
    Pair p = *queue.begin();
    queue.erase(queue.begin());
    pending.erase({p.i, p.j});
    const Sorted& f = G[p.i];
    const Sorted& g = G[p.j];
    if (f.empty() || g.empty()) continue;
    if (coprime(f.front().e, g.front().e)) continue;
    if (f.size() == 1 && g.size() == 1) continue;
    Exponents l = exp_lcm(f.front().e, g.front().e);
    bool chain = false;
    for (std::size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == p.i || k == p.j || G[k].empty()) continue;
      if (!divides(G[k].front().e, l)) continue;
      auto key = [](std::size_t a, std::size_t b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
      if (!pending.count(key(p.i, k)) && !pending.count(key(p.j, k))) chain = true;
    }
    if (chain) continue;
    Sorted h = reduce(spoly(f, g, order), G, order);
    if (!h.empty()) add(std::move(h));
  }

  if (unit) return {Polynomial::constant(vars, 1)};

  // minimize
  std::vector<Sorted> min;
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (G[i].empty()) continue;
    bool redundant = false;
    for (std::size_t k = 0; k < G.size() && !redundant; ++k) {
      if (k == i || G[k].empty()) continue;
      if (divides(G[k].front().e, G[i].front().e)) {
        // equal leading monomials: keep the earlier one
        redundant = G[k].front().e != G[i].front().e || k < i;
      }
    }
    if (!redundant) min.push_back(G[i]);
  }
  // interreduce
  for (std::size_t i = 0; i < min.size(); ++i) {
    Sorted tail(min[i].begin() + 1, min[i].end());
    Sorted r = reduce(std::move(tail), min, order, i);
    r.insert(r.begin(), min[i].front());
    min[i] = std::move(r);
    make_monic(min[i]);
  }
  std::sort(min.begin(), min.end(),
            [&](const Sorted& a, const Sorted& b) { return order.compare(a.front().e, b.front().e) < 0; });
  std::vector<Polynomial> out;
  for (const auto& s : min) out.push_back(from_sorted(vars, s));
  return out;
}

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("exact_divide by zero");
  if (!same_vars(a.vars(), b.vars())) throw std::invalid_argument("polynomial variable-set mismatch");
  auto order = MonomialOrder::grevlex();
  Sorted p = to_sorted(a, order);
  Sorted d = to_sorted(b, order);
  Polynomial q(a.vars());
  while (!p.empty()) {
    if (!divides(d.front().e, p.front().e)) throw std::domain_error("exact_divide: not divisible");
    GaussRational c = p.front().c / d.front().c;
    Exponents shift = exp_div(p.front().e, d.front().e);
    q += Polynomial::monomial(a.vars(), shift, c);
    p = sub_scaled(p, 0, c, shift, d, order);
  }
  return q;
}

}  // namespace dtrans::exact
