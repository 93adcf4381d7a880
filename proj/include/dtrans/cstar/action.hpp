#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dtrans/exact/ideal.hpp"

namespace dtrans::cstar {

using exact::Ideal;
using exact::Polynomial;
using exact::VarList;
using cvec = Eigen::VectorXcd;
using cplx = std::complex<double>;

/// lambda * (v_0, ..., v_k) = (v_0, lambda^b1 v_1, ..., lambda^bk v_k).
class WeightedAction {
 public:
  WeightedAction(std::vector<unsigned> block_dims, std::vector<unsigned> weights);

  std::size_t k() const { return dims_.size() - 1; }
  std::size_t blocks() const { return dims_.size(); }
  std::size_t dim() const { return offsets_.back(); }
  const std::vector<unsigned>& block_dims() const { return dims_; }
  const std::vector<unsigned>& weights() const { return weights_; }
  std::size_t offset(std::size_t block) const { return offsets_[block]; }
  std::size_t block_of(std::size_t coord) const;

  cvec apply(cplx lambda, const cvec& v) const;
  /// Same action with reversed blocks and weights b'_j = b_k - b_{k-j}.
  WeightedAction reversed() const;

 private:
  std::vector<unsigned> dims_, weights_;
  std::vector<std::size_t> offsets_;
};

/// Variables mu, lam, w<j>_<c>, v<j>_<c> shared by every equation system.
VarList action_vars(const WeightedAction& a);

struct EquationSystem {
  std::size_t m = 0, M = 0;  // interval [m, M]
  std::vector<Polynomial> equations;
};

/// Ideal in (mu, lam, v) generated by mu^(bk-bj) lam^bj v_{j,c}.
Ideal action_ideal(const WeightedAction& a);
/// One system per connected interval of {0..k}: the 2x2 minors of the
/// weighted w-vector against the v-vector.
std::vector<EquationSystem> fundamental_equations(const WeightedAction& a);

/// Zero when w is replaced by a graph point: v_j -> lam^bj mu^(bk-bj) w_j.
std::size_t graph_substitution_residuals(const WeightedAction& a, const std::vector<EquationSystem>& systems);
/// The involution I -> (k - M, k - m), mu <-> lam, blocks reversed maps the
/// systems of `a` onto those of a.reversed().
bool symmetric_under_involution(const WeightedAction& a);

enum class Side { Infinity, Zero };

struct ComponentDescriptor {
  std::size_t index = 0;
  Side side = Side::Infinity;
  bool slice_only = false;
  std::string ambient;
  std::string equation;
  unsigned multiplicity = 1;
  std::size_t dimension = 0;
};

std::vector<ComponentDescriptor> exceptional_components(const WeightedAction& a);
/// Parameter count of the chart of S(F_i) x_{F_i} U(F_i) (or its mirror).
std::size_t dense_stratum_dimension(const WeightedAction& a, const ComponentDescriptor& c);
std::string label(const ComponentDescriptor& c);

/// Sine of the angle between two complex lines.
double chordal_distance(const cvec& a, const cvec& b);
/// Sine of the angle between a line and a subspace spanned by coordinates
/// in [lo, hi).
double distance_to_coordinate_span(const cvec& a, std::size_t lo, std::size_t hi);

enum class Direction { ToInfinity, ToZero };

struct LimitRecord {
  cvec input;
  Direction direction = Direction::ToInfinity;
  std::size_t index = 0;
  cvec limit;
  double validation_lambda = 0;
  double validation_distance = 0;
  bool validated = false;
};

LimitRecord classify_limit(const WeightedAction& a, const cvec& v, Direction dir, double validation_lambda = 1e5,
                           double tol = 1e-4);

struct GraphClosureReport {
  std::size_t systems = 0;
  std::size_t equations = 0;
  std::size_t symbolic_nonzero = 0;
  std::size_t samples = 0;
  double max_distance = 0;
  std::vector<std::pair<std::string, double>> per_component;
};

/// Exact check of every equation system plus numeric approximation of the
/// dense strata of the exceptional components by graph points at lambda.
GraphClosureReport verify_graph_closure(const WeightedAction& a, std::size_t n_samples, std::uint64_t seed,
                                        double lambda = 1e4);

struct LimitSample {
  cplx param;
  cplx lambda;
  std::size_t block = 0;  // limit lies near the span of blocks (block, block + 1)
  cvec coords;
  double residual = 0;
  bool interior = false;
  std::size_t cluster = 0;
};

struct LimitSetOptions {
  double interior_ratio = 1e3;
  double cluster_tol = 1e-3;
};

std::vector<LimitSample> empirical_limit_set(const WeightedAction& a, const std::function<cvec(cplx)>& s,
                                             const std::vector<cplx>& grid, const std::vector<cplx>& lambdas,
                                             const LimitSetOptions& opt = {});

struct LineCoverage {
  std::size_t block = 0;           // line through F_block and F_(block+1)
  std::size_t interior_points = 0; // interior samples with residual below tol
  double best_residual = 1;
};

std::vector<LineCoverage> line_coverage(const WeightedAction& a, const std::vector<LimitSample>& samples,
                                        double residual_tol);

void write_limit_csv(std::ostream& os, const std::vector<LimitSample>& samples);

}  // namespace dtrans::cstar
