#include "dtrans/geom/bundles.hpp"

#include <stdexcept>

namespace dtrans::geom {

namespace {

// x^* H y for column vectors of expressions and a row-major matrix.
Expr form(const std::vector<Expr>& x, const std::vector<Expr>& H, const std::vector<Expr>& y) {
  const std::size_t m = x.size();
  std::vector<Expr> xb;
  for (const auto& e : x) xb.push_back(e.conj());
  Expr s;
  for (std::size_t a = 0; a < m; ++a) {
    if (xb[a].is_zero()) continue;
    for (std::size_t b = 0; b < m; ++b) {
      if (y[b].is_zero() || H[a * m + b].is_zero()) continue;
      s = s + xb[a] * H[a * m + b] * y[b];
    }
  }
  return s;
}

std::vector<Expr> unit(std::size_t m, std::size_t a) {
  std::vector<Expr> e(m);
  e[a] = Expr(1.0);
  return e;
}

// Gram matrix of the frame {e_a : a != j} projected orthogonally to u.
MetricField complement_metric(std::size_t n, const std::vector<Expr>& H, const std::vector<Expr>& u, std::size_t j) {
  const std::size_t m = u.size();
  Expr uu = form(u, H, u);
  Expr inv = pow(uu, -1);
  std::vector<Expr> eu(m), ue(m);
  for (std::size_t a = 0; a < m; ++a) {
    eu[a] = form(unit(m, a), H, u);
    ue[a] = form(u, H, unit(m, a));
  }
  std::vector<Expr> g;
  for (std::size_t a = 0; a < m; ++a) {
    if (a == j) continue;
    for (std::size_t b = 0; b < m; ++b) {
      if (b == j) continue;
      g.push_back(H[a * m + b] - eu[a] * ue[b] * inv);
    }
  }
  return MetricField(n, m - 1, std::move(g));
}

void check_section(const MetricField& hE, const std::vector<Expr>& s) {
  if (s.size() != hE.rank()) throw std::invalid_argument("section: one component per fiber coordinate");
  for (const auto& e : s)
    if (e.arity() > hE.n()) throw std::invalid_argument("section: component uses variable beyond base dimension");
}

}  // namespace

std::vector<Expr> ProjectiveChart::homogeneous() const {
  if (j > r()) throw std::invalid_argument("ProjectiveChart: chart index out of range");
  std::vector<Expr> u;
  std::size_t next = n_base();
  for (std::size_t a = 0; a <= r(); ++a) u.push_back(a == j ? Expr(1.0) : Expr::z(next++));
  return u;
}

std::vector<Expr> ProjectiveChart::ambient() const {
  const std::size_t m = r() + 1;
  std::vector<Expr> H(m * m);
  H[0] = Expr(1.0);
  for (std::size_t a = 0; a < r(); ++a)
    for (std::size_t b = 0; b < r(); ++b) H[(a + 1) * m + b + 1] = hE.entry(a, b);
  return H;
}

MetricField tautological_metric(const ProjectiveChart& c) {
  auto u = c.homogeneous();
  return MetricField(c.n_total(), 1, {form(u, c.ambient(), u)});
}

MetricField dual_tautological_metric(const ProjectiveChart& c) {
  auto u = c.homogeneous();
  return MetricField(c.n_total(), 1, {pow(form(u, c.ambient(), u), -1)});
}

MetricField quotient_metric(const ProjectiveChart& c) {
  return complement_metric(c.n_total(), c.ambient(), c.homogeneous(), c.j);
}

MetricField section_line_metric(const MetricField& hE, const std::vector<Expr>& s) {
  check_section(hE, s);
  return MetricField(hE.n(), 1, {form(s, hE.entries(), s)});
}

MetricField section_line_dual_metric(const MetricField& hE, const std::vector<Expr>& s) {
  check_section(hE, s);
  return MetricField(hE.n(), 1, {pow(form(s, hE.entries(), s), -1)});
}

MetricField section_quotient_metric(const MetricField& hE, const std::vector<Expr>& s, std::size_t j) {
  check_section(hE, s);
  if (j >= s.size()) throw std::invalid_argument("section_quotient_metric: slot out of range");
  if (s.size() < 2) throw std::invalid_argument("section_quotient_metric: rank of E must be at least 2");
  return complement_metric(hE.n(), hE.entries(), s, j);
}

MetricField pullback_dual_tautological(const MetricField& hE, const std::vector<Expr>& s, cplx lambda) {
  check_section(hE, s);
  ProjectiveChart c{hE, 0};
  std::vector<Expr> images;
  for (std::size_t k = 0; k < hE.n(); ++k) images.push_back(Expr::z(k));
  for (const auto& e : s) images.push_back(Expr(lambda) * e);
  return dual_tautological_metric(c).pullback(hE.n(), images);
}

std::size_t dominant_slot(const MetricField& hE, const std::vector<Expr>& s, std::span<const cplx> z) {
  check_section(hE, s);
  auto h = hE.value(z);
  std::size_t best = 0;
  double big = -1;
  for (std::size_t a = 0; a < s.size(); ++a) {
    double v = std::norm(s[a].eval(z)) * h(a, a).real();
    if (v > big) {
      big = v;
      best = a;
    }
  }
  if (big <= 0) throw std::domain_error("section vanishes at the requested point");
  return best;
}

P1Atlas p1_dual_tautological() {
  Expr w = Expr::z(0);
  return {MetricField(1, 1, {pow(1.0 + abs2(w), -1)}), MetricField(1, 1, {pow(1.0 + abs2(w), -1)})};
}

P1Atlas conformal(const P1Atlas& a, const Expr& f0, const Expr& f1) {
  return {a.chart0.conformal(f0), a.chart1.conformal(f1)};
}

std::vector<std::pair<Expr, Expr>> p1_perturbations(double eps) {
  Expr w = Expr::z(0), wb = Expr::zb(0);
  Expr q = pow(1.0 + abs2(w), -1);
  Expr u0 = abs2(w) * q;  // |w|^2/(1+|w|^2), equal to 1/(1+|w'|^2) in the other chart
  Expr u1 = q;
  return {
      {1.0 + eps * u0, 1.0 + eps * u1},
      {exp(eps * (1.0 - abs2(w)) * q), exp(eps * (abs2(w) - 1.0) * q)},
      {1.0 + eps * (w + wb) * q, 1.0 + eps * (w + wb) * q},
      {1.0 + eps * cplx(0, 1) * (w - wb) * q, 1.0 - eps * cplx(0, 1) * (w - wb) * q},
      {1.0 + eps * u0 * u0, 1.0 + eps * u1 * u1},
  };
}

cplx integrate_c1(const P1Atlas& a, const DiskQuadrature& q) {
  return integrate_p1(chern_form(a.chart0, 1), chern_form(a.chart1, 1), q);
}

}  // namespace dtrans::geom
