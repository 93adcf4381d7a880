#include "dtrans/geom/superconnection.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dtrans::geom {

namespace {

cmat blockdiag(const cmat& a, const cmat& b) {
  cmat m = cmat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  m.topLeftCorner(a.rows(), a.cols()) = a;
  m.bottomRightCorner(b.rows(), b.cols()) = b;
  return m;
}

MatForm blockdiag(const MatForm& a, const MatForm& b) {
  MatForm m(a.n(), a.rank() + b.rank());
  for (Mask k = 0; k < (Mask(1) << (2 * a.n())); ++k) m[k] = blockdiag(a[k], b[k]);
  return m;
}

}  // namespace

SuperBundleData::SuperBundleData(MetricField hp, MetricField hm, std::vector<Expr> a, std::vector<Expr> b)
    : hplus(std::move(hp)), hminus(std::move(hm)), A(std::move(a)), B(std::move(b)) {
  if (hplus.n() != hminus.n()) throw std::invalid_argument("SuperBundleData: metrics over different charts");
  const std::size_t P = p(), Q = q(), r = P + Q, N = n();
  if (A.size() != P * Q) throw std::invalid_argument("SuperBundleData: A must be q x p");
  if (!B.empty() && B.size() != P * Q) throw std::invalid_argument("SuperBundleData: B must be p x q");
  std::vector<Expr> V(r * r);
  for (std::size_t i = 0; i < Q; ++i)
    for (std::size_t j = 0; j < P; ++j) V[(P + i) * r + j] = A[i * P + j];
  if (!B.empty())
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = 0; j < Q; ++j) V[i * r + P + j] = B[i * Q + j];
  std::vector<Expr> out = V;
  for (int bar = 0; bar < 2; ++bar)
    for (std::size_t k = 0; k < N; ++k)
      for (const auto& e : V) out.push_back(e.diff(k, bar));
  for (const auto& e : out)
    if (e.arity() > N) throw std::invalid_argument("SuperBundleData: morphism uses variable beyond chart dimension");
  tape_ = std::make_shared<Tape>(out);
}

std::vector<double> SuperBundleData::grading() const {
  std::vector<double> g(p() + q(), 1.0);
  for (std::size_t i = p(); i < g.size(); ++i) g[i] = -1.0;
  return g;
}

std::vector<cmat> SuperBundleData::odd_jet(std::span<const cplx> z) const {
  const std::size_t r = p() + q();
  auto v = tape_->eval(z);
  std::vector<cmat> out;
  for (std::size_t b = 0; b < 1 + 2 * n(); ++b) {
    cmat m(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) m(i, j) = v[b * r * r + i * r + j];
    out.push_back(std::move(m));
  }
  return out;
}

double SuperBundleData::chain_defect(std::span<const cplx> z) const {
  cmat V = odd_jet(z)[0];
  return (V * V).cwiseAbs().maxCoeff();
}

MatForm superconnection_curvature(const SuperBundleData& d, cplx lambda, std::span<const cplx> z) {
  const std::size_t n = d.n(), r = d.p() + d.q();
  const auto eps = d.grading();
  MetricJet jp = d.hplus.jet(z), jm = d.hminus.jet(z);
  cmat H = blockdiag(jp.h, jm.h);
  Eigen::PartialPivLU<cmat> lu(H);
  auto V = d.odd_jet(z);
  const cmat& V0 = V[0];
  cmat Vd = V0.adjoint();
  cmat Vstar = lu.solve(Vd * H);

  MatForm X(n, r);
  X[0] = lambda * V0 + std::conj(lambda) * Vstar;
  for (std::size_t k = 0; k < n; ++k) {
    for (int bar = 0; bar < 2; ++bar) {
      cmat Hk = bar ? blockdiag(jp.dzb[k], jm.dzb[k]) : blockdiag(jp.dz[k], jm.dz[k]);
      // d(V^dagger) along z_k is (dzb_k V)^dagger and vice versa
      const cmat& dV = V[1 + (bar ? n : 0) + k];
      const cmat& dVconj = V[1 + (bar ? 0 : n) + k];
      cmat dVstar = -lu.solve(Hk * Vstar) + lu.solve(dVconj.adjoint() * H) + lu.solve(Vd * Hk);
      X[bar ? dzb(n, k) : dz(k)] = lambda * dV + std::conj(lambda) * dVstar;
    }
  }
  MatForm theta = blockdiag(chern_connection(d.hplus, z), chern_connection(d.hminus, z));
  MatForm F = blockdiag(curvature(d.hplus, z), curvature(d.hminus, z));
  MatForm X0(n, r);
  X0[0] = X[0];
  MatForm dX = X;
  dX[0].setZero();
  return F + dX + theta.product(X0, eps) + X0.product(theta, eps) + X0.product(X0, eps);
}

MatForm exp_even(const MatForm& F, std::span<const double> grading) {
  const std::size_t n = F.n(), r = F.rank();
  double norm = 0;
  for (Mask a = 0; a < (Mask(1) << (2 * n)); ++a) norm += F[a].cwiseAbs().rowwise().sum().maxCoeff();
  int s = norm > 0.5 ? int(std::ceil(std::log2(norm / 0.5))) : 0;
  MatForm Y = std::ldexp(1.0, -s) * F;
  MatForm E(n, r), term(n, r);
  E[0] = cmat::Identity(r, r);
  term[0] = cmat::Identity(r, r);
  for (int k = 1; k <= 20; ++k) {
    term = (1.0 / k) * term.product(Y, grading);
    E += term;
  }
  for (int i = 0; i < s; ++i) E = E.product(E, grading);
  return E;
}

Form super_chern_character(const MatForm& F, std::span<const double> grading, const ChernNormalization& norm) {
  MatForm e = exp_even(norm.minus_exponent ? -1.0 * F : F, grading);
  Form ch = e.supertrace(grading);
  if (norm.two_pi_i) {
    const cplx c(0, 1.0 / (2 * std::numbers::pi));
    for (Mask a = 0; a < ch.size(); ++a) {
      int k = degree(a);
      if (k % 2 == 0) ch[a] *= std::pow(c, k / 2);
    }
  }
  return ch;
}

FormField super_chern_character(const SuperBundleData& d, cplx lambda, const ChernNormalization& norm) {
  return FormField{d.n(),
                   [d, lambda, norm](std::span<const cplx> z) {
                     return super_chern_character(superconnection_curvature(d, lambda, z), d.grading(), norm);
                   },
                   {}};
}

}  // namespace dtrans::geom
