#pragma once

#include <memory>

#include "dtrans/geom/metric.hpp"

namespace dtrans::geom {

/// E = E+ (rank p) + E- (rank q) with metrics, A : E+ -> E- (q x p, row-major)
/// and, in the chain case, B : E- -> E+ (p x q). The odd endomorphism is
/// V = [[0, B], [A, 0]] and the superconnection is nabla + lambda V + conj(lambda) V^*.
struct SuperBundleData {
  MetricField hplus, hminus;
  std::vector<Expr> A;
  std::vector<Expr> B;  // empty outside the chain case

  SuperBundleData(MetricField hp, MetricField hm, std::vector<Expr> a, std::vector<Expr> b = {});

  std::size_t n() const { return hplus.n(); }
  std::size_t p() const { return hplus.rank(); }
  std::size_t q() const { return hminus.rank(); }
  std::vector<double> grading() const;
  /// max |BA|, |AB| at z; zero in a valid chain case
  double chain_defect(std::span<const cplx> z) const;

  /// V and its first Wirtinger derivatives: blocks V, dz_k V, dzb_k V.
  std::vector<cmat> odd_jet(std::span<const cplx> z) const;

 private:
  std::shared_ptr<const Tape> tape_;
};

struct ChernNormalization {
  bool minus_exponent = true;  // str(exp(-F)) rather than str(exp(F))
  bool two_pi_i = true;        // degree-2k part scaled by (i/2pi)^k
};

/// Curvature A^2 = F(nabla) + [nabla, X] + X^2 with X = lambda V + conj(lambda) V^*.
MatForm superconnection_curvature(const SuperBundleData& d, cplx lambda, std::span<const cplx> z);
/// Exponential of an even matrix form in the graded algebra (scaling and squaring).
MatForm exp_even(const MatForm& F, std::span<const double> grading);
Form super_chern_character(const MatForm& F, std::span<const double> grading, const ChernNormalization& norm = {});
FormField super_chern_character(const SuperBundleData& d, cplx lambda, const ChernNormalization& norm = {});

}  // namespace dtrans::geom
