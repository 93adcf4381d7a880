#include "dtrans/geom/metric.hpp"

#include <limits>
#include <numbers>
#include <stdexcept>

namespace dtrans::geom {

namespace {

// Output layout of the tape: blocks of r*r entries for h, dz_k, dzb_k, dzb_l dz_k.
std::vector<Expr> jet_outputs(std::size_t n, const std::vector<Expr>& h) {
  std::vector<Expr> out = h;
  std::vector<std::vector<Expr>> d(n);
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& e : h) d[k].push_back(e.diff(k));
  for (std::size_t k = 0; k < n; ++k) out.insert(out.end(), d[k].begin(), d[k].end());
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& e : h) out.push_back(e.diff(k, true));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (const auto& e : d[k]) out.push_back(e.diff(l, true));
  return out;
}

cmat block(const std::vector<cplx>& v, std::size_t b, std::size_t r) {
  cmat m(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) = v[b * r * r + i * r + j];
  return m;
}

Eigen::PartialPivLU<cmat> factor(const cmat& h) {
  Eigen::PartialPivLU<cmat> lu(h);
  double s = h.cwiseAbs().maxCoeff();
  if (s == 0 || !std::isfinite(s) || std::abs(lu.determinant()) <= 1e-300 ||
      lu.rcond() < 1e-14)
    throw std::domain_error("metric is singular at evaluation point");
  return lu;
}

}  // namespace

MetricField::MetricField(std::size_t n, std::size_t r, std::vector<Expr> entries)
    : n_(n), r_(r), entries_(std::move(entries)) {
  if (n == 0 || r == 0) throw std::invalid_argument("MetricField: n and r must be positive");
  if (entries_.size() != r * r) throw std::invalid_argument("MetricField: need r*r entries");
  for (const auto& e : entries_)
    if (e.arity() > n) throw std::invalid_argument("MetricField: entry uses variable beyond chart dimension");
  tape_ = std::make_shared<Tape>(jet_outputs(n, entries_));
}

MetricField MetricField::parse(std::size_t n, const std::vector<std::vector<std::string>>& rows) {
  std::size_t r = rows.size();
  std::vector<Expr> e;
  for (const auto& row : rows) {
    if (row.size() != r) throw std::invalid_argument("MetricField::parse: matrix must be square");
    for (const auto& s : row) e.push_back(parse_expr(s, n));
  }
  return MetricField(n, r, std::move(e));
}

MetricField MetricField::identity(std::size_t n, std::size_t r) {
  std::vector<Expr> e(r * r);
  for (std::size_t i = 0; i < r; ++i) e[i * r + i] = Expr(1.0);
  return MetricField(n, r, std::move(e));
}

MetricField MetricField::scalar(std::size_t n, const Expr& f) { return MetricField(n, 1, {f}); }

cmat MetricField::value(std::span<const cplx> z) const {
  if (z.size() != n_) throw std::invalid_argument("MetricField: point dimension mismatch");
  cmat m(r_, r_);
  for (std::size_t i = 0; i < r_; ++i)
    for (std::size_t j = 0; j < r_; ++j) m(i, j) = entries_[i * r_ + j].eval(z);
  return m;
}

MetricJet MetricField::jet(std::span<const cplx> z) const {
  if (z.size() != n_) throw std::invalid_argument("MetricField: point dimension mismatch");
  auto v = tape_->eval(z);
  MetricJet j;
  j.h = block(v, 0, r_);
  for (std::size_t k = 0; k < n_; ++k) j.dz.push_back(block(v, 1 + k, r_));
  for (std::size_t k = 0; k < n_; ++k) j.dzb.push_back(block(v, 1 + n_ + k, r_));
  for (std::size_t q = 0; q < n_ * n_; ++q) j.dzbz.push_back(block(v, 1 + 2 * n_ + q, r_));
  return j;
}

MetricField MetricField::pullback(std::size_t new_n, const std::vector<Expr>& images) const {
  if (images.size() != n_) throw std::invalid_argument("pullback: need one image per coordinate");
  std::vector<Expr> e;
  for (const auto& x : entries_) e.push_back(x.substitute(images));
  return MetricField(new_n, r_, std::move(e));
}

MetricField MetricField::conformal(const Expr& f) const {
  std::vector<Expr> e;
  for (const auto& x : entries_) e.push_back(x * f);
  return MetricField(n_, r_, std::move(e));
}

namespace {

// Central-difference Wirtinger derivatives (d/dz_k, d/dzb_k) of a matrix function.
template <class F>
std::pair<cmat, cmat> wirtinger(F&& f, const Point& z, std::size_t k, double t) {
  Point p = z;
  auto at = [&](cplx dz) {
    p[k] = z[k] + dz;
    cmat v = f(p);
    p[k] = z[k];
    return v;
  };
  cmat dx = (at(t) - at(-t)) / (2 * t);
  cmat dy = (at(cplx(0, t)) - at(cplx(0, -t))) / (2 * t);
  return {0.5 * (dx - cplx(0, 1) * dy), 0.5 * (dx + cplx(0, 1) * dy)};
}

}  // namespace

MetricCheck validate(const MetricField& h, const std::vector<Point>& samples, std::vector<double> steps,
                     double rel_tol) {
  MetricCheck c;
  c.fd_steps = steps;
  c.fd_error.assign(steps.size(), 0.0);
  c.min_eigenvalue = std::numeric_limits<double>::infinity();
  const std::size_t n = h.n();
  for (const auto& z : samples) {
    MetricJet j = h.jet(z);
    c.hermitian_error = std::max(c.hermitian_error, (j.h - j.h.adjoint()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<cmat> es(0.5 * (j.h + j.h.adjoint()), Eigen::EigenvaluesOnly);
    c.min_eigenvalue = std::min(c.min_eigenvalue, es.eigenvalues().minCoeff());
    double scale = std::max(1.0, j.h.cwiseAbs().maxCoeff());
    for (std::size_t s = 0; s < steps.size(); ++s) {
      double e = 0;
      for (std::size_t k = 0; k < n; ++k) {
        auto [fz, fzb] = wirtinger([&](const Point& q) { return h.value(q); }, z, k, steps[s]);
        e = std::max({e, (fz - j.dz[k]).cwiseAbs().maxCoeff(), (fzb - j.dzb[k]).cwiseAbs().maxCoeff()});
        for (std::size_t l = 0; l < n; ++l) {
          auto g = wirtinger([&](const Point& q) { return h.jet(q).dz[k]; }, z, l, steps[s]).second;
          e = std::max(e, (g - j.dzbz[l * n + k]).cwiseAbs().maxCoeff());
        }
      }
      c.fd_error[s] = std::max(c.fd_error[s], e / scale);
    }
  }
  c.ok = c.hermitian_error < 1e-12 && c.min_eigenvalue > 0;
  for (double e : c.fd_error) c.ok = c.ok && e < rel_tol;
  return c;
}

MatForm chern_connection(const MetricField& h, std::span<const cplx> z) {
  MetricJet j = h.jet(z);
  auto lu = factor(j.h);
  MatForm t(h.n(), h.rank());
  for (std::size_t k = 0; k < h.n(); ++k) t[dz(k)] = lu.solve(j.dz[k]);
  return t;
}

MatForm curvature(const MetricField& h, std::span<const cplx> z) {
  const std::size_t n = h.n();
  MetricJet j = h.jet(z);
  auto lu = factor(j.h);
  MatForm F(n, h.rank());
  for (std::size_t k = 0; k < n; ++k) {
    cmat tk = lu.solve(j.dz[k]);
    for (std::size_t l = 0; l < n; ++l) {
      // dzb_l (h^{-1} h_k) = -h^{-1} h_{lbar} h^{-1} h_k + h^{-1} h_{lbar k}
      cmat d = lu.solve(j.dzbz[l * n + k] - j.dzb[l] * tk);
      // dzb_l ^ dz_k = -dz_k ^ dzb_l
      F[dz(k) | dzb(n, l)] -= d;
    }
  }
  return F;
}

std::vector<Form> elementary_symmetric(const MatForm& omega, int max) {
  const std::size_t n = omega.n();
  std::vector<Form> p(max + 1, Form(n)), e(max + 1, Form(n));
  e[0] = Form::scalar(n, 1);
  MatForm power = omega;
  for (int k = 1; k <= max; ++k) {
    if (k > 1) power = power.product(omega);
    p[k] = power.trace();
  }
  for (int k = 1; k <= max; ++k) {
    Form acc(n);
    for (int i = 1; i <= k; ++i) {
      Form t = e[k - i].wedge(p[i]);
      acc += (i % 2 ? 1.0 : -1.0) * t;
    }
    e[k] = (1.0 / k) * acc;
  }
  return e;
}

Form chern_form(const MetricField& h, int j, std::span<const cplx> z) {
  if (j < 0 || j > int(h.rank())) throw std::invalid_argument("chern_form: degree out of range");
  if (j == 0) return Form::scalar(h.n(), 1);
  MatForm omega = cplx(0, 1.0 / (2 * std::numbers::pi)) * curvature(h, z);
  return elementary_symmetric(omega, j)[j];
}

FormField chern_form(const MetricField& h, int j) {
  if (j < 0 || j > int(h.rank())) throw std::invalid_argument("chern_form: degree out of range");
  return FormField{h.n(), [h, j](std::span<const cplx> z) { return chern_form(h, j, z); }, {}};
}

}  // namespace dtrans::geom
