#include "dtrans/currents/currents.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace dtrans::currents {

using geom::dz;
using geom::dzb;
using geom::wedge_sign;

namespace {

constexpr double kEdge = 1e-3;  // exp(-1/kEdge) underflows to zero

std::pair<int, int> bidegree_of(Mask m, std::size_t n) {
  return {geom::holomorphic_degree(m, n), geom::antiholomorphic_degree(m, n)};
}

Expr bump_factor(std::size_t k, cplx c, double R, cplx slope) {
  Expr z = Expr::z(k), zb = Expr::zb(k);
  Expr rho = abs2(z - Expr(c)) * (1.0 / (R * R));
  Expr g = std::exp(1.0) * exp(-1.0 * pow(1.0 - rho, -1));
  if (slope == cplx(0)) return g;
  Expr mod = 1.0 + 0.5 * (std::conj(slope) * (z - Expr(c)) + slope * (zb - Expr(std::conj(c))));
  return g * mod;
}

struct Node2 {
  cplx z;
  double w;
};

// Polar product rule on an annulus r in [lo, hi] around c.
void ring(std::vector<Node2>& out, cplx c, double lo, double hi, std::size_t order, std::size_t angular) {
  auto g = geom::gauss_legendre(order, lo, hi);
  double dt = 2 * std::numbers::pi / angular;
  for (std::size_t i = 0; i < g.x.size(); ++i)
    for (std::size_t k = 0; k < angular; ++k)
      out.push_back({c + std::polar(g.x[i], (k + 0.5) * dt), g.w[i] * g.x[i] * dt});
}

std::vector<Node2> disk_rule(cplx c, double R, std::size_t order, std::size_t angular) {
  std::vector<Node2> out;
  ring(out, c, 0, R, order, angular);
  return out;
}

// Polar coordinates about p covering exactly the disk |z - c| < R (p inside):
// z = p + t r_max(theta) e^{i theta}, t in [0, 1], dyadic in t below 1/2.
std::vector<Node2> singular_rule(cplx p, cplx c, double R, const PairingQuadrature& q, std::size_t depth) {
  std::vector<std::pair<double, double>> t;
  auto add = [&](double lo, double hi, std::size_t order) {
    auto g = geom::gauss_legendre(order, lo, hi);
    for (std::size_t i = 0; i < g.x.size(); ++i) t.push_back({g.x[i], g.w[i]});
  };
  add(0.5, 1.0, q.radial_order);
  double outer = 0.5;
  for (std::size_t d = 0; d < depth; ++d) {
    add(0.5 * outer, outer, q.singular_order);
    outer *= 0.5;
  }
  add(0, outer, q.singular_order);
  std::vector<Node2> out;
  const cplx off = p - c;
  double dt = 2 * std::numbers::pi / q.angular;
  for (std::size_t k = 0; k < q.angular; ++k) {
    cplx e = std::polar(1.0, (k + 0.5) * dt);
    // |off + r e| = R
    double b = (std::conj(e) * off).real();
    double rmax = -b + std::sqrt(b * b - std::norm(off) + R * R);
    for (auto [x, w] : t) out.push_back({p + x * rmax * e, w * x * rmax * rmax * dt});
  }
  return out;
}

cplx sum_rule(const std::vector<Node2>& rule, const std::function<cplx(cplx)>& f) {
  cplx s = 0;
  for (const auto& nd : rule) s += nd.w * f(nd.z);
  return s;
}

std::vector<cplx> inside(const std::vector<cplx>& pts, cplx c, double R) {
  std::vector<cplx> out;
  for (auto p : pts)
    if (std::abs(p - c) < R) out.push_back(p);
  return out;
}

// Integral of f over the disk, refined around at most one singular point.
cplx integrate_disk_points(const std::function<cplx(cplx)>& f, cplx c, double R, const std::vector<cplx>& singular,
                           const PairingQuadrature& q, bool certify) {
  auto hot = inside(singular, c, R);
  if (hot.empty()) return sum_rule(disk_rule(c, R, q.radial_order, q.angular), f);
  if (hot.size() > 1) throw std::domain_error("more than one singular point inside one support");
  cplx a = sum_rule(singular_rule(hot[0], c, R, q, q.depth), f);
  if (!certify) return a;
  cplx b = sum_rule(singular_rule(hot[0], c, R, q, 2 * q.depth), f);
  double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  if (std::abs(a - b) > q.certify_rel * scale && std::abs(a - b) > 1e-14)
    throw NonConvergent("log-singular pairing did not settle under depth doubling");
  return b;
}

}  // namespace

// ---- test forms

TestForm::TestForm(std::size_t n, std::vector<std::pair<Mask, Expr>> coefficients, std::vector<cplx> centers,
                   std::vector<double> radii, std::string id)
    : n_(n), coef_(std::move(coefficients)), centers_(std::move(centers)), radii_(std::move(radii)), id_(std::move(id)),
      bideg_{-1, -1} {
  if (n_ == 0 || centers_.size() != n_ || radii_.size() != n_)
    throw std::invalid_argument("TestForm: one support disk per coordinate");
  for (double r : radii_)
    if (!(r > 0)) throw std::invalid_argument("TestForm: support radius must be positive");
  std::vector<Expr> outs;
  for (const auto& [m, e] : coef_) {
    if (m >> (2 * n_)) throw std::invalid_argument("TestForm: mask exceeds dimension");
    auto b = bidegree_of(m, n_);
    if (bideg_.first < 0) bideg_ = b;
    else if (b != bideg_) throw std::invalid_argument("TestForm: coefficients must share one bidegree");
    outs.push_back(e);
  }
  tape_ = std::make_shared<geom::Tape>(outs);
}

TestForm TestForm::bump(cplx center, double radius, cplx slope, std::string id) {
  return TestForm(1, {{0, bump_factor(0, center, radius, slope)}}, {center}, {radius}, std::move(id));
}

TestForm TestForm::product_bump(const std::vector<cplx>& centers, const std::vector<double>& radii, std::string id) {
  if (centers.size() != radii.size()) throw std::invalid_argument("product_bump: size mismatch");
  Expr e(1.0);
  for (std::size_t k = 0; k < centers.size(); ++k) e = e * bump_factor(k, centers[k], radii[k], 0);
  return TestForm(centers.size(), {{0, e}}, centers, radii, std::move(id));
}

bool TestForm::in_support(std::span<const cplx> z) const {
  if (z.size() != n_) throw std::invalid_argument("TestForm: point dimension mismatch");
  for (std::size_t k = 0; k < n_; ++k)
    if (std::norm(z[k] - centers_[k]) / (radii_[k] * radii_[k]) >= 1 - kEdge) return false;
  return true;
}

Form TestForm::operator()(std::span<const cplx> z) const {
  Form f(n_);
  if (!in_support(z)) return f;
  auto v = tape_->eval(z);
  for (std::size_t i = 0; i < coef_.size(); ++i) f[coef_[i].first] += v[i];
  return f;
}

FormField TestForm::field() const {
  geom::Chart c;
  c.n = n_;
  return FormField{n_, [self = *this](std::span<const cplx> z) { return self(z); }, c};
}

TestForm TestForm::ddbar() const {
  std::map<Mask, Expr> acc;
  for (const auto& [m, f] : coef_)
    for (std::size_t l = 0; l < n_; ++l) {
      Mask bl = dzb(n_, l);
      if (m & bl) continue;
      Expr fl = f.diff(l, true);
      if (fl.is_zero()) continue;
      for (std::size_t k = 0; k < n_; ++k) {
        Mask ak = dz(k);
        if (m & ak) continue;
        Expr fkl = fl.diff(k, false);
        if (fkl.is_zero()) continue;
        int s = wedge_sign(ak, bl) * wedge_sign(ak | bl, m);
        Mask t = ak | bl | m;
        acc[t] = acc[t] + double(s) * fkl;
      }
    }
  std::vector<std::pair<Mask, Expr>> out(acc.begin(), acc.end());
  TestForm r(n_, std::move(out), centers_, radii_, id_.empty() ? id_ : "ddbar(" + id_ + ")");
  if (bideg_.first >= 0) r.bideg_ = {bideg_.first + 1, bideg_.second + 1};
  return r;
}

TestForm TestForm::wedge_basis(Mask b) const {
  std::vector<std::pair<Mask, Expr>> out;
  for (const auto& [m, f] : coef_) {
    int s = wedge_sign(m, b);
    if (s) out.push_back({m | b, double(s) * f});
  }
  TestForm r(n_, std::move(out), centers_, radii_, id_);
  if (bideg_.first >= 0) {
    auto d = bidegree_of(b, n_);
    r.bideg_ = {bideg_.first + d.first, bideg_.second + d.second};
  }
  return r;
}

TestForm TestForm::scaled(cplx a) const {
  std::vector<std::pair<Mask, Expr>> out;
  for (const auto& [m, f] : coef_) out.push_back({m, Expr(a) * f});
  TestForm r(n_, std::move(out), centers_, radii_, id_);
  r.bideg_ = bideg_;
  return r;
}

TestForm TestForm::plus(const TestForm& o) const {
  if (o.n_ != n_ || o.centers_ != centers_ || o.radii_ != radii_)
    throw std::invalid_argument("TestForm::plus: supports differ");
  if (bideg_.first >= 0 && o.bideg_.first >= 0 && bideg_ != o.bideg_)
    throw std::invalid_argument("TestForm::plus: bidegrees differ");
  auto out = coef_;
  out.insert(out.end(), o.coef_.begin(), o.coef_.end());
  TestForm r(n_, std::move(out), centers_, radii_, id_ + "+" + o.id_);
  if (r.bideg_.first < 0) r.bideg_ = bideg_.first >= 0 ? bideg_ : o.bideg_;
  return r;
}

// ---- currents

cplx Current::operator()(const TestForm& eta) const {
  if (eta.n() != n) throw std::invalid_argument(label + ": test form lives in another dimension");
  if (eta.bidegree() != bidimension)
    throw std::invalid_argument(label + ": bidegree of the test form does not match the bidimension");
  return pair(eta);
}

Current point_current(std::size_t n, const std::vector<std::pair<Point, int>>& points) {
  std::vector<Stratum> s;
  for (const auto& [p, m] : points) s.push_back({p, {}, m});
  return analytic_current(n, std::move(s));
}

Current analytic_current(std::size_t n, std::vector<Stratum> strata, std::size_t order) {
  if (strata.empty()) throw std::invalid_argument("analytic_current: no strata");
  const std::size_t k = strata[0].dirs.size();
  for (const auto& s : strata) {
    if (s.base.size() != n) throw std::invalid_argument("analytic_current: base point dimension mismatch");
    if (s.dirs.size() != k) throw std::invalid_argument("analytic_current: strata must share one dimension");
    if (s.multiplicity <= 0) throw std::invalid_argument("analytic_current: multiplicities must be positive");
    for (const auto& d : s.dirs)
      if (d.size() != n) throw std::invalid_argument("analytic_current: direction dimension mismatch");
  }
  Current c;
  c.label = "analytic";
  c.n = n;
  c.bidimension = {int(k), int(k)};
  c.pair = [n, k, order, strata](const TestForm& eta) {
    cplx total = 0;
    for (const auto& s : strata) {
      if (k == 0) {
        total += double(s.multiplicity) * eta(s.base)[0];
        continue;
      }
      Eigen::MatrixXcd D(n, k);
      Eigen::VectorXcd b(n), c0(n);
      for (std::size_t a = 0; a < n; ++a) {
        b(a) = s.base[a];
        c0(a) = eta.centers()[a];
        for (std::size_t j = 0; j < k; ++j) D(a, j) = s.dirs[j][a];
      }
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
      double smin = svd.singularValues()(k - 1);
      if (smin < 1e-12) throw std::invalid_argument("analytic_current: directions are dependent");
      Eigen::VectorXcd t0 = svd.solve(c0 - b);
      double ball = 0;
      for (double r : eta.radii()) ball += r * r;
      double reach = std::sqrt(ball) / smin;
      // composite Gauss-Legendre, 4 panels per real parameter
      std::vector<std::vector<std::pair<double, double>>> axes(2 * k);
      for (std::size_t d = 0; d < 2 * k; ++d) {
        double mid = d % 2 == 0 ? t0(d / 2).real() : t0(d / 2).imag();
        for (int p = 0; p < 4; ++p) {
          auto g = geom::gauss_legendre(order / 2, mid - reach + p * reach / 2, mid - reach + (p + 1) * reach / 2);
          for (std::size_t i = 0; i < g.x.size(); ++i) axes[d].push_back({g.x[i], g.w[i]});
        }
      }
      std::vector<std::size_t> idx(2 * k, 0);
      cplx sum = 0;
      for (;;) {
        Eigen::VectorXcd t(k);
        double w = 1;
        for (std::size_t j = 0; j < k; ++j) {
          t(j) = cplx(axes[2 * j][idx[2 * j]].first, axes[2 * j + 1][idx[2 * j + 1]].first);
          w *= axes[2 * j][idx[2 * j]].second * axes[2 * j + 1][idx[2 * j + 1]].second;
        }
        Eigen::VectorXcd z = b + D * t;
        Point zp(z.data(), z.data() + n);
        if (eta.in_support(zp)) sum += w * geom::pullback_holomorphic(eta(zp), D).top_density();
        std::size_t d = 0;
        while (d < 2 * k && ++idx[d] == axes[d].size()) idx[d++] = 0;
        if (d == 2 * k) break;
      }
      total += double(s.multiplicity) * sum;
    }
    return total;
  };
  return c;
}

Current form_current(const FormField& w, std::pair<int, int> bidegree, const PairingQuadrature& q,
                     std::vector<cplx> avoid) {
  const std::size_t n = w.n;
  Current c;
  c.label = "form";
  c.n = n;
  c.bidimension = {int(n) - bidegree.first, int(n) - bidegree.second};
  if (c.bidimension.first < 0 || c.bidimension.second < 0) throw std::invalid_argument("form_current: bidegree too large");
  c.pair = [w, q, n, avoid](const TestForm& eta) -> cplx {
    if (n == 1) {
      auto f = [&](cplx z) {
        Point p{z};
        if (!eta.in_support(p)) return cplx(0);
        return w.eval(p).wedge(eta(p)).top_density();
      };
      return integrate_disk_points(f, eta.centers()[0], eta.radii()[0], avoid, q, false);
    }
    if (!avoid.empty()) throw std::invalid_argument("form_current: avoided points only supported on C");
    std::vector<std::vector<Node2>> rules;
    for (std::size_t k = 0; k < n; ++k)
      rules.push_back(disk_rule(eta.centers()[k], eta.radii()[k], q.radial_order / 2, q.angular / 2));
    std::vector<std::size_t> idx(n, 0);
    Point z(n);
    cplx sum = 0;
    for (;;) {
      double wt = 1;
      for (std::size_t k = 0; k < n; ++k) {
        z[k] = rules[k][idx[k]].z;
        wt *= rules[k][idx[k]].w;
      }
      if (eta.in_support(z)) sum += wt * w.eval(z).wedge(eta(z)).top_density();
      std::size_t d = 0;
      while (d < n && ++idx[d] == rules[d].size()) idx[d++] = 0;
      if (d == n) break;
    }
    return sum;
  };
  return c;
}

Current l1_current(std::function<cplx(cplx)> g, std::vector<cplx> singular, const PairingQuadrature& q,
                   std::string label) {
  Current c;
  c.label = std::move(label);
  c.n = 1;
  c.bidimension = {1, 1};
  c.pair = [g = std::move(g), singular = std::move(singular), q](const TestForm& eta) {
    auto f = [&](cplx z) {
      Point p{z};
      if (!eta.in_support(p)) return cplx(0);
      return g(z) * eta(p).top_density();
    };
    return integrate_disk_points(f, eta.centers()[0], eta.radii()[0], singular, q, true);
  };
  return c;
}

Current scaled(const Current& T, cplx a) {
  Current c = T;
  c.label = T.label;
  c.pair = [p = T.pair, a](const TestForm& eta) { return a * p(eta); };
  return c;
}

cplx ddbar_pair(const Current& T, const TestForm& eta) {
  auto h = eta.ddbar();
  if (eta.bidegree().first >= 0 && h.bidegree() != T.bidimension)
    throw std::invalid_argument(T.label + ": dd-bar of the test form does not match the bidimension");
  if (h.coefficients().empty()) return 0;
  return T.pair(h);
}

cplx integrate_l1(const std::function<cplx(cplx)>& g, cplx center, double radius, const std::vector<cplx>& singular,
                  const PairingQuadrature& q) {
  return integrate_disk_points(g, center, radius, singular, q, true);
}

// ---- families

FiberModel chern_model(const geom::MetricField& hE,
                       const std::function<geom::MetricField(const geom::ProjectiveChart&)>& metric, int degree) {
  FiberModel m;
  m.n_base = hE.n();
  m.r = hE.rank();
  for (std::size_t j = 0; j <= m.r; ++j) m.charts.push_back(geom::chern_form(metric(geom::ProjectiveChart{hE, j}), degree));
  return m;
}

FormField pullback_family(const FiberModel& model, const std::vector<Expr>& s, cplx lambda) {
  const std::size_t nb = model.n_base, r = model.r;
  if (s.size() != r) throw std::invalid_argument("pullback_family: one section component per fiber slot");
  if (model.charts.size() != r + 1) throw std::invalid_argument("pullback_family: need r + 1 charts");
  std::vector<Expr> outs = s;
  for (const auto& e : s)
    for (std::size_t b = 0; b < nb; ++b) {
      if (!e.diff(b, true).is_zero()) throw std::invalid_argument("pullback_family: section must be holomorphic");
      outs.push_back(e.diff(b, false));
    }
  auto tape = std::make_shared<geom::Tape>(outs);
  auto eval = [model, tape, nb, r, lambda](std::span<const cplx> m) {
    if (m.size() != nb) throw std::invalid_argument("pullback_family: base point dimension mismatch");
    auto v = tape->eval(m);
    std::vector<cplx> u(r + 1);
    std::vector<std::vector<cplx>> du(r + 1, std::vector<cplx>(nb, 0));
    u[0] = 1;
    for (std::size_t a = 0; a < r; ++a) {
      u[a + 1] = lambda * v[a];
      for (std::size_t b = 0; b < nb; ++b) du[a + 1][b] = lambda * v[r + a * nb + b];
    }
    std::size_t j = 0;
    for (std::size_t a = 1; a <= r; ++a)
      if (std::abs(u[a]) > std::abs(u[j])) j = a;
    Point pt(m.begin(), m.end());
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(nb + r, nb);
    for (std::size_t b = 0; b < nb; ++b) J(b, b) = 1;
    std::size_t row = nb;
    for (std::size_t a = 0; a <= r; ++a) {
      if (a == j) continue;
      pt.push_back(u[a] / u[j]);
      for (std::size_t b = 0; b < nb; ++b) J(row, b) = (du[a][b] * u[j] - u[a] * du[j][b]) / (u[j] * u[j]);
      ++row;
    }
    return geom::pullback_holomorphic(model.charts[j].eval(pt), J);
  };
  geom::Chart c;
  c.n = nb;
  return FormField{nb, eval, c};
}

// ---- limits and residuals

WeakLimit weak_limit(const std::vector<SweepPoint>& sweep, double max_residual) {
  if (sweep.size() < 4) throw std::invalid_argument("weak_limit: need at least four sweep points");
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (!(sweep[i].lambda > 0)) throw std::invalid_argument("weak_limit: lambda must be positive");
    if (i && !(sweep[i].lambda > sweep[i - 1].lambda)) throw std::invalid_argument("weak_limit: lambda must increase");
  }
  WeakLimit out;
  const std::size_t N = sweep.size();
  cplx last = sweep.back().value;
  out.limit = last;
  double spread = 0, mag = 0;
  for (const auto& p : sweep) {
    spread = std::max(spread, std::abs(p.value - last));
    mag = std::max(mag, std::abs(p.value));
  }
  if (spread <= 1e-14 * std::max(1.0, mag)) {
    out.alpha = std::numeric_limits<double>::infinity();
    out.extrapolated = true;
    out.note = "constant sequence";
    return out;
  }
  std::vector<cplx> d(N - 1);
  for (std::size_t i = 0; i + 1 < N; ++i) d[i] = sweep[i + 1].value - sweep[i].value;
  for (std::size_t i = 0; i + 2 < N; ++i)
    if ((d[i] * std::conj(d[i + 1])).real() <= 0) {
      out.oscillatory = true;
      out.note = "successive differences change direction";
      return out;
    }
  // initial exponent from log|d| against log of the geometric midpoints
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i + 1 < N; ++i) {
    double x = 0.5 * (std::log(sweep[i].lambda) + std::log(sweep[i + 1].lambda));
    double y = std::log(std::abs(d[i]) / (sweep[i + 1].lambda - sweep[i].lambda));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  double m = N - 1;
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double alpha0 = -slope - 1;
  if (!(alpha0 > 0)) {
    out.note = "differences do not decay";
    return out;
  }
  auto fit = [&](double a, cplx& L, cplx& c) {
    // least squares for value = L + c lambda^-a
    double s1 = 0, sq = 0;
    cplx sv = 0, sqv = 0;
    for (const auto& p : sweep) {
      double t = std::pow(p.lambda, -a);
      s1 += t, sq += t * t, sv += p.value, sqv += t * p.value;
    }
    double det = double(N) * sq - s1 * s1;
    c = (double(N) * sqv - s1 * sv) / det;
    L = (sv - c * s1) / double(N);
    double worst = 0;
    for (const auto& p : sweep) worst = std::max(worst, std::abs(L + c * std::pow(p.lambda, -a) - p.value));
    return worst;
  };
  double lo = alpha0 / 4, hi = alpha0 * 4;
  const double g = (std::sqrt(5.0) - 1) / 2;
  cplx L, c;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = fit(x1, L, c), f2 = fit(x2, L, c);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = fit(x1, L, c);
    } else {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = fit(x2, L, c);
    }
  }
  double alpha = 0.5 * (lo + hi);
  double worst = fit(alpha, L, c);
  out.alpha = alpha;
  out.residual = worst / spread;
  if (out.residual > max_residual) {
    out.note = "power-law fit rejected";
    return out;
  }
  out.limit = L;
  out.extrapolated = true;
  return out;
}

std::vector<ResidualRecord> transgression_residual(const std::vector<Term>& lhs, const Current& T,
                                                   const std::vector<TestForm>& tests) {
  std::vector<ResidualRecord> out;
  for (const auto& eta : tests) {
    cplx l = 0;
    for (const auto& t : lhs) l += t.sign * t.current(eta);
    cplx r = ddbar_pair(T, eta);
    double a = std::abs(l - r);
    out.push_back({eta.id(), l, r, a, a / std::max({std::abs(l), std::abs(r), 1e-12})});
  }
  return out;
}

cplx point_fiber_potential(double abs_v, const geom::SingularQuadrature& q) {
  if (!(abs_v > 0)) throw std::domain_error("point_fiber_potential: singular at v = 0");
  // t = s / |v| turns the weight into 1/(1+|s|^2)^2 dA_s and log|t - 1| into log|s - |v|| - log|v|
  auto f = [abs_v](cplx s) { return std::log(std::abs(s - abs_v)) / std::pow(1 + std::norm(s), 2); };
  cplx I = geom::integrate_plane_singular(f, abs_v, 0.5, q) / std::numbers::pi;
  return cplx(0, 1 / std::numbers::pi) * (I - std::log(abs_v));
}

Current point_fiber_potential_current(const PairingQuadrature& pq, const geom::SingularQuadrature& q) {
  struct Memo {
    std::mutex mu;
    std::map<double, cplx> v;
  };
  auto memo = std::make_shared<Memo>();
  auto g = [memo, q](cplx v) {
    double a = std::abs(v);
    {
      std::lock_guard lock(memo->mu);
      if (auto it = memo->v.find(a); it != memo->v.end()) return it->second;
    }
    cplx r = point_fiber_potential(a, q);
    std::lock_guard lock(memo->mu);
    return memo->v.emplace(a, r).first->second;
  };
  return l1_current(g, {0}, pq, "fiber_potential");
}

}  // namespace dtrans::currents
