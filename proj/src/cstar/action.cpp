#include "dtrans/cstar/action.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>

namespace dtrans::cstar {

using exact::Exponents;
using exact::GaussRational;
using exact::MonomialOrder;

WeightedAction::WeightedAction(std::vector<unsigned> block_dims, std::vector<unsigned> weights)
    : dims_(std::move(block_dims)), weights_(std::move(weights)) {
  if (dims_.empty() || dims_.size() != weights_.size())
    throw std::invalid_argument("weighted action: block dimensions and weights must have equal nonzero length");
  if (weights_.front() != 0) throw std::invalid_argument("weighted action: weights must start at 0");
  for (std::size_t j = 1; j < weights_.size(); ++j)
    if (weights_[j] <= weights_[j - 1]) throw std::invalid_argument("weighted action: weights must increase strictly");
  if (weights_.back() > 64) throw std::invalid_argument("weighted action: weights above 64 are out of range");
  offsets_.push_back(0);
  for (auto d : dims_) {
    if (d == 0) throw std::invalid_argument("weighted action: block dimensions must be positive");
    offsets_.push_back(offsets_.back() + d);
  }
}

std::size_t WeightedAction::block_of(std::size_t coord) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), coord);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

namespace {

// lambda^(b_j - ref) v_j, avoiding overflow for large weights
cvec scaled_apply(const WeightedAction& a, cplx lambda, const cvec& v, int ref) {
  cvec out = v;
  for (std::size_t j = 0; j < a.blocks(); ++j) {
    cplx f = std::pow(lambda, static_cast<int>(a.weights()[j]) - ref);
    for (std::size_t c = a.offset(j); c < a.offset(j + 1); ++c) out[c] *= f;
  }
  return out;
}

}  // namespace

cvec WeightedAction::apply(cplx lambda, const cvec& v) const { return scaled_apply(*this, lambda, v, 0); }

WeightedAction WeightedAction::reversed() const {
  std::vector<unsigned> d(dims_.rbegin(), dims_.rend()), w;
  for (std::size_t j = 0; j < weights_.size(); ++j) w.push_back(weights_.back() - weights_[k() - j]);
  return WeightedAction(d, w);
}

VarList action_vars(const WeightedAction& a) {
  std::vector<std::string> names{"mu", "lam"};
  for (const char* p : {"w", "v"})
    for (std::size_t j = 0; j < a.blocks(); ++j)
      for (unsigned c = 0; c < a.block_dims()[j]; ++c) names.push_back(p + std::to_string(j) + "_" + std::to_string(c));
  return exact::make_vars(names);
}

namespace {

std::size_t w_index(const WeightedAction& a, std::size_t coord) { return 2 + coord; }
std::size_t v_index(const WeightedAction& a, std::size_t coord) { return 2 + a.dim() + coord; }

Polynomial mono(const VarList& vars, std::size_t var, unsigned mu_pow, unsigned lam_pow) {
  Exponents e(vars->size(), 0);
  e[0] = mu_pow;
  e[1] = lam_pow;
  e[var] += 1;
  return Polynomial::monomial(vars, e);
}

}  // namespace

Ideal action_ideal(const WeightedAction& a) {
  std::vector<std::string> names{"mu", "lam"};
  for (std::size_t j = 0; j < a.blocks(); ++j)
    for (unsigned c = 0; c < a.block_dims()[j]; ++c) names.push_back("v" + std::to_string(j) + "_" + std::to_string(c));
  VarList vars = exact::make_vars(names);
  const unsigned bk = a.weights().back();
  std::vector<Polynomial> g;
  for (std::size_t coord = 0; coord < a.dim(); ++coord) {
    unsigned b = a.weights()[a.block_of(coord)];
    g.push_back(mono(vars, 2 + coord, bk - b, b));
  }
  return Ideal(vars, g);
}

std::vector<EquationSystem> fundamental_equations(const WeightedAction& a) {
  VarList vars = action_vars(a);
  const auto& beta = a.weights();
  std::vector<EquationSystem> out;
  for (std::size_t m = 0; m <= a.k(); ++m) {
    for (std::size_t M = m; M <= a.k(); ++M) {
      EquationSystem sys{m, M, {}};
      std::vector<Polynomial> weighted, plain;
      for (std::size_t coord = a.offset(m); coord < a.offset(M + 1); ++coord) {
        std::size_t j = a.block_of(coord);
        weighted.push_back(mono(vars, w_index(a, coord), beta[M] - beta[j], beta[j] - beta[m]));
        plain.push_back(Polynomial::variable(vars, v_index(a, coord)));
      }
      for (std::size_t p = 0; p < weighted.size(); ++p)
        for (std::size_t q = p + 1; q < weighted.size(); ++q)
          sys.equations.push_back(weighted[p] * plain[q] - weighted[q] * plain[p]);
      out.push_back(std::move(sys));
    }
  }
  return out;
}

std::size_t graph_substitution_residuals(const WeightedAction& a, const std::vector<EquationSystem>& systems) {
  VarList vars = action_vars(a);
  std::vector<Polynomial> images;
  for (std::size_t i = 0; i < vars->size(); ++i) images.push_back(Polynomial::variable(vars, i));
  const unsigned bk = a.weights().back();
  for (std::size_t coord = 0; coord < a.dim(); ++coord) {
    unsigned b = a.weights()[a.block_of(coord)];
    images[v_index(a, coord)] = mono(vars, w_index(a, coord), bk - b, b);
  }
  std::size_t nonzero = 0;
  for (const auto& s : systems)
    for (const auto& e : s.equations)
      if (!e.substitute(images).is_zero()) ++nonzero;
  return nonzero;
}

bool symmetric_under_involution(const WeightedAction& a) {
  WeightedAction r = a.reversed();
  VarList target = action_vars(r);
  VarList source = action_vars(a);
  std::vector<Polynomial> images(source->size(), Polynomial(target));
  images[0] = Polynomial::variable(target, 1);
  images[1] = Polynomial::variable(target, 0);
  for (std::size_t j = 0; j < a.blocks(); ++j)
    for (unsigned c = 0; c < a.block_dims()[j]; ++c) {
      std::size_t from = a.offset(j) + c, to = r.offset(a.k() - j) + c;
      images[w_index(a, from)] = Polynomial::variable(target, w_index(r, to));
      images[v_index(a, from)] = Polynomial::variable(target, v_index(r, to));
    }
  auto order = MonomialOrder::grevlex();
  auto normalized = [&](const std::vector<EquationSystem>& systems, bool map) {
    std::set<std::string> s;
    for (const auto& sys : systems)
      for (const auto& e : sys.equations) s.insert((map ? e.substitute(images) : e).monic(order).str());
    return s;
  };
  return normalized(fundamental_equations(a), true) == normalized(fundamental_equations(r), false);
}

std::vector<ComponentDescriptor> exceptional_components(const WeightedAction& a) {
  std::vector<ComponentDescriptor> out;
  const std::size_t k = a.k();
  const std::size_t dim = a.dim() - 1;
  auto add = [&](std::size_t i, Side side, bool slice_only) {
    ComponentDescriptor c;
    c.index = i;
    c.side = side;
    c.slice_only = slice_only;
    std::string plus = "P(V_" + std::to_string(i) + "^+)", minus = "P(V_" + std::to_string(i) + "^-)";
    c.ambient = side == Side::Infinity ? plus + " x " + minus : minus + " x " + plus;
    c.equation = "w_" + std::to_string(i) + " ^ v_" + std::to_string(i) + " = 0";
    c.dimension = dim;
    out.push_back(c);
  };
  if (k == 0) return out;
  for (std::size_t i = 0; i < k; ++i) add(i, Side::Infinity, false);
  for (std::size_t i = 1; i <= k; ++i) add(i, Side::Zero, false);
  add(k, Side::Infinity, true);
  add(0, Side::Zero, true);
  return out;
}

std::size_t dense_stratum_dimension(const WeightedAction& a, const ComponentDescriptor& c) {
  std::size_t lower = a.offset(c.index + 1);        // dim V_i^+
  std::size_t upper = a.dim() - a.offset(c.index);  // dim V_i^-
  std::size_t middle = a.block_dims()[c.index];
  // first factor: projective point with nonzero block i; second factor: block i
  // pinned to the first one's block i, remaining coordinates free
  std::size_t first = (c.side == Side::Infinity ? lower : upper) - 1;
  std::size_t second = (c.side == Side::Infinity ? upper : lower) - middle;
  return first + second;
}

std::string label(const ComponentDescriptor& c) {
  return std::string("C_") + std::to_string(c.index) + (c.side == Side::Infinity ? "^inf" : "^0");
}

double chordal_distance(const cvec& a, const cvec& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) throw std::invalid_argument("chordal distance of a zero vector");
  cvec ah = a / na, bh = b / nb;
  cvec r = bh - ah.dot(bh) * ah;
  return std::min(1.0, r.norm());
}

double distance_to_coordinate_span(const cvec& a, std::size_t lo, std::size_t hi) {
  double n = a.norm();
  if (n == 0) throw std::invalid_argument("distance of a zero vector");
  double out = 0;
  for (Eigen::Index c = 0; c < a.size(); ++c)
    if (static_cast<std::size_t>(c) < lo || static_cast<std::size_t>(c) >= hi) out += std::norm(a[c]);
  return std::sqrt(out) / n;
}

LimitRecord classify_limit(const WeightedAction& a, const cvec& v, Direction dir, double validation_lambda, double tol) {
  if (v.size() != static_cast<Eigen::Index>(a.dim())) throw std::invalid_argument("point dimension mismatch");
  if (v.norm() == 0) throw std::invalid_argument("zero vector is not a projective point");
  std::vector<bool> present(a.blocks(), false);
  for (std::size_t c = 0; c < a.dim(); ++c)
    if (v[c] != cplx(0)) present[a.block_of(c)] = true;
  LimitRecord r;
  r.input = v;
  r.direction = dir;
  if (dir == Direction::ToInfinity) {
    for (std::size_t j = a.blocks(); j-- > 0;)
      if (present[j]) {
        r.index = j;
        break;
      }
  } else {
    for (std::size_t j = 0; j < a.blocks(); ++j)
      if (present[j]) {
        r.index = j;
        break;
      }
  }
  r.limit = cvec::Zero(v.size());
  for (std::size_t c = a.offset(r.index); c < a.offset(r.index + 1); ++c) r.limit[c] = v[c];
  r.validation_lambda = dir == Direction::ToInfinity ? validation_lambda : 1.0 / validation_lambda;
  cvec moved = scaled_apply(a, r.validation_lambda, v, static_cast<int>(a.weights()[r.index]));
  r.validation_distance = chordal_distance(moved, r.limit);
  r.validated = r.validation_distance < tol;
  return r;
}

GraphClosureReport verify_graph_closure(const WeightedAction& a, std::size_t n_samples, std::uint64_t seed,
                                        double lambda) {
  GraphClosureReport rep;
  auto systems = fundamental_equations(a);
  rep.systems = systems.size();
  for (const auto& s : systems) rep.equations += s.equations.size();
  rep.symbolic_nonzero = graph_substitution_residuals(a, systems);

  // samples live in the affine chart where block i has unit norm and the
  // other coordinates lie in the unit disk
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto rnd = [&] { return std::polar(std::sqrt(unif(rng)), 2 * M_PI * unif(rng)); };
  const auto& beta = a.weights();
  const std::size_t n = a.dim();
  for (const auto& comp : exceptional_components(a)) {
    if (comp.slice_only) continue;
    const std::size_t i = comp.index;
    double worst = 0;
    for (std::size_t t = 0; t < n_samples; ++t) {
      cvec w = cvec::Zero(n), v = cvec::Zero(n), s;
      double dist;
      cvec block(a.block_dims()[i]);
      for (auto& x : block) x = rnd();
      block /= block.norm();
      auto fill = [&](cvec& target, std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c)
          target[c] = a.block_of(c) == i ? block[c - a.offset(i)] : rnd();
      };
      if (comp.side == Side::Infinity) {
        // w in S(F_i), v in U(F_i), same limit on F_i
        fill(w, 0, a.offset(i + 1));
        fill(v, a.offset(i), n);
        s = w;
        for (std::size_t c = a.offset(i + 1); c < n; ++c)
          s[c] += std::pow(lambda, double(beta[i]) - double(beta[a.block_of(c)])) * v[c];
        cvec image = scaled_apply(a, lambda, s, static_cast<int>(beta[i]));
        double p1 = 1.0 / std::sqrt(1.0 + lambda * lambda);  // [1:lambda] against [0:1]
        dist = std::max({chordal_distance(s, w), chordal_distance(image, v), p1});
      } else {
        const double small = 1.0 / lambda;
        fill(w, a.offset(i), n);
        fill(v, 0, a.offset(i + 1));
        s = w;
        for (std::size_t c = 0; c < a.offset(i); ++c)
          s[c] += std::pow(small, double(beta[i]) - double(beta[a.block_of(c)])) * v[c];
        cvec image = scaled_apply(a, small, s, static_cast<int>(beta[i]));
        double p1 = small / std::sqrt(1.0 + small * small);  // [1:small] against [1:0]
        dist = std::max({chordal_distance(s, w), chordal_distance(image, v), p1});
      }
      worst = std::max(worst, dist);
      ++rep.samples;
    }
    rep.per_component.emplace_back(label(comp), worst);
    rep.max_distance = std::max(rep.max_distance, worst);
  }
  return rep;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<LimitSample> empirical_limit_set(const WeightedAction& a, const std::function<cvec(cplx)>& s,
                                             const std::vector<cplx>& grid, const std::vector<cplx>& lambdas,
                                             const LimitSetOptions& opt) {
  std::vector<LimitSample> out;
  for (const auto& z : grid) {
    cvec base = s(z);
    if (base.size() != static_cast<Eigen::Index>(a.dim())) throw std::invalid_argument("section dimension mismatch");
    if (base.norm() == 0) throw std::invalid_argument("section vanishes on the grid");
    for (const auto& lam : lambdas) {
      cvec p = a.apply(lam, base);
      p /= p.norm();
      LimitSample smp{z, lam, 0, p, 0.0, false, 0};
      if (a.k() == 0) {
        out.push_back(std::move(smp));
        continue;
      }
      double best = 2;
      for (std::size_t i = 0; i < a.k(); ++i) {
        double r = distance_to_coordinate_span(p, a.offset(i), a.offset(i + 2));
        if (r < best) {
          best = r;
          smp.block = i;
        }
      }
      smp.residual = best;
      double lo = p.segment(a.offset(smp.block), a.block_dims()[smp.block]).norm();
      double hi = p.segment(a.offset(smp.block + 1), a.block_dims()[smp.block + 1]).norm();
      smp.interior = lo > 0 && hi > 0 && hi / lo < opt.interior_ratio && lo / hi < opt.interior_ratio;
      // representative scaled so the largest coordinate is 1
      Eigen::Index arg = 0;
      p.cwiseAbs().maxCoeff(&arg);
      smp.coords = p / p[arg];
      out.push_back(std::move(smp));
    }
  }

  // union-find clustering; |p_0| of the unit vector is phase invariant and
  // 1-Lipschitz for the chordal metric, so a sorted sweep finds all pairs
  std::vector<std::size_t> idx(out.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> key(out.size());
  std::vector<cvec> unit(out.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    unit[t] = out[t].coords / out[t].coords.norm();
    key[t] = std::abs(unit[t][0]);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return key[x] < key[y]; });
  UnionFind uf(out.size());
  for (std::size_t p = 0; p < idx.size(); ++p)
    for (std::size_t q = p + 1; q < idx.size() && key[idx[q]] - key[idx[p]] <= opt.cluster_tol; ++q)
      if (uf.find(idx[p]) != uf.find(idx[q]) && chordal_distance(unit[idx[p]], unit[idx[q]]) < opt.cluster_tol)
        uf.unite(idx[p], idx[q]);
  std::vector<std::size_t> ids(out.size(), static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t t = 0; t < out.size(); ++t) {
    std::size_t root = uf.find(t);
    if (ids[root] == static_cast<std::size_t>(-1)) ids[root] = next++;
    out[t].cluster = ids[root];
  }
  return out;
}

std::vector<LineCoverage> line_coverage(const WeightedAction& a, const std::vector<LimitSample>& samples,
                                        double residual_tol) {
  std::vector<LineCoverage> out;
  for (std::size_t i = 0; i < a.k(); ++i) out.push_back({i, 0, 1.0});
  for (const auto& s : samples) {
    if (!s.interior || s.block >= out.size()) continue;
    auto& line = out[s.block];
    line.best_residual = std::min(line.best_residual, s.residual);
    if (s.residual < residual_tol) ++line.interior_points;
  }
  return out;
}

void write_limit_csv(std::ostream& os, const std::vector<LimitSample>& samples) {
  std::size_t n = samples.empty() ? 0 : static_cast<std::size_t>(samples.front().coords.size());
  os << "param_re,param_im,lambda,block_pair";
  for (std::size_t c = 0; c < n; ++c) os << ",x" << c << "_re,x" << c << "_im";
  os << ",cluster_id\n";
  os.precision(17);
  for (const auto& s : samples) {
    os << s.param.real() << ',' << s.param.imag() << ',' << std::abs(s.lambda) << ',' << s.block << '-' << s.block + 1;
    for (Eigen::Index c = 0; c < s.coords.size(); ++c) os << ',' << s.coords[c].real() << ',' << s.coords[c].imag();
    os << ',' << s.cluster << '\n';
  }
}

}  // namespace dtrans::cstar
