#pragma once

#include <memory>

#include "dtrans/geom/expr.hpp"
#include "dtrans/geom/forms.hpp"

namespace dtrans::geom {

using cmat = Eigen::MatrixXcd;

/// h and its Wirtinger derivatives at a point; dzbz[l * n + k] = d/dzb_l d/dz_k h.
struct MetricJet {
  cmat h;
  std::vector<cmat> dz, dzb, dzbz;
};

/// Hermitian metric on a trivial bundle of rank r over an n-dimensional chart,
/// given entrywise by expressions h_ij(z, zb), with h_ij = <e_i, e_j>.
class MetricField {
 public:
  MetricField(std::size_t n, std::size_t r, std::vector<Expr> entries);
  /// rows of expression strings over z1..zn
  static MetricField parse(std::size_t n, const std::vector<std::vector<std::string>>& rows);
  static MetricField identity(std::size_t n, std::size_t r);
  /// diag(1, 1, ...) * f for a scalar function.
  static MetricField scalar(std::size_t n, const Expr& f);

  std::size_t n() const { return n_; }
  std::size_t rank() const { return r_; }
  const Expr& entry(std::size_t i, std::size_t j) const { return entries_[i * r_ + j]; }
  const std::vector<Expr>& entries() const { return entries_; }

  cmat value(std::span<const cplx> z) const;
  MetricJet jet(std::span<const cplx> z) const;
  /// Pull back along a holomorphic change of variables: z_k -> images[k].
  MetricField pullback(std::size_t new_n, const std::vector<Expr>& images) const;
  /// Multiply every entry by a positive scalar function.
  MetricField conformal(const Expr& f) const;

 private:
  std::size_t n_, r_;
  std::vector<Expr> entries_;
  std::shared_ptr<const Tape> tape_;
};

struct MetricCheck {
  double hermitian_error = 0;
  double min_eigenvalue = 0;
  /// relative error of analytic against central differences, per step
  std::vector<double> fd_steps, fd_error;
  bool ok = false;
};

MetricCheck validate(const MetricField& h, const std::vector<Point>& samples,
                     std::vector<double> steps = {1e-4, 1e-5}, double rel_tol = 1e-6);

/// theta = h^{-1} dh, a matrix (1,0)-form. Throws std::domain_error when h is singular.
MatForm chern_connection(const MetricField& h, std::span<const cplx> z);
/// Theta = dbar theta (the (2,0) part dtheta + theta^2 vanishes for the Chern connection).
MatForm curvature(const MetricField& h, std::span<const cplx> z);
/// j-th elementary symmetric function of (i/2pi) Theta.
Form chern_form(const MetricField& h, int j, std::span<const cplx> z);
FormField chern_form(const MetricField& h, int j);

/// Elementary symmetric forms e_0..e_max of a matrix 2-form, by Newton's identities.
std::vector<Form> elementary_symmetric(const MatForm& omega, int max);

}  // namespace dtrans::geom
