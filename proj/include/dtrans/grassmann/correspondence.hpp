#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>

namespace dtrans::grass {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;

/// Singular values below kRankTol * largest count as zero, in every predicate.
inline constexpr double kRankTol = 1e-10;

/// E + F with E = C^pE first, F = C^pF second.
struct HermSpace {
  std::size_t pE = 1, pF = 1;
  std::size_t dim() const { return pE + pF; }
  bool operator==(const HermSpace&) const = default;
};

/// Subspace of E + F with an orthonormal frame (standard inner product).
class Subspace {
 public:
  /// Orthonormalizes the column span; `dim` checks the rank when given.
  Subspace(HermSpace ambient, const cmat& spanning, std::optional<std::size_t> dim = {});
  static Subspace zero(HermSpace ambient);
  static Subspace E(HermSpace ambient);
  static Subspace F(HermSpace ambient);

  const HermSpace& ambient() const { return amb_; }
  std::size_t dim() const { return frame_.cols(); }
  const cmat& frame() const { return frame_; }
  double gram_deviation() const;

 private:
  HermSpace amb_;
  cmat frame_;
};

/// sin of the largest principal angle; 1 when dimensions differ.
double distance(const Subspace& a, const Subspace& b);
bool same(const Subspace& a, const Subspace& b, double tol = 1e-10);

/// Optional positive-definite metric on E + F, block diagonal in the splitting.
struct Metric {
  cmat H;
  static Metric standard(HermSpace s) { return {cmat::Identity(s.dim(), s.dim())}; }
};

/// Orthonormal basis of the column span of m (rank threshold kRankTol).
cmat orthonormal_span(const cmat& m);
/// Basis of {x : M x = 0}.
cmat null_space(const cmat& m, std::size_t cols);
/// Complement with respect to H: {y : U^* H y = 0}.
cmat complement(const cmat& U, const cmat& H);
/// U cap W through the null space of the stacked complement conditions.
cmat intersect(const cmat& U, const cmat& W, const cmat& H);

Subspace complement(const Subspace& L, const Metric& m);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace cap_E(const Subspace& L);
Subspace cap_F(const Subspace& L);
Subspace project_E(const Subspace& L);
Subspace project_F(const Subspace& L);
/// Whether a contains b.
bool contains(const Subspace& a, const Subspace& b);

/// Column span of [I; A] for A : E -> F (pF x pE).
Subspace graph(const cmat& A);
/// Column span of [B; I] for B : F -> E (pE x pF).
Subspace cograph(const cmat& B);
/// diag(1_E, lambda 1_F) applied to L.
Subspace rescale(const Subspace& L, cplx lambda);

struct DomainCheck {
  bool ok = true;
  std::string failed;  // name of the violated condition
  cvec witness;        // nonzero vector in the offending intersection
};

/// pi_E(L1) + pi_E(L2) = E (as L1^perp cap L2^perp cap E = 0) and L1 cap L2 cap F = 0.
DomainCheck star_domain(const Subspace& L1, const Subspace& L2, const Metric* m = nullptr);
/// L1^perp cap L2 cap E = 0 and L1 cap L2^perp cap F = 0, with dim L1 = pE, dim L2 = pF.
DomainCheck diamond_domain(const Subspace& L1, const Subspace& L2);

class DomainError : public std::domain_error {
 public:
  DomainError(const std::string& what, DomainCheck c) : std::domain_error(what), check(std::move(c)) {}
  DomainCheck check;
};

/// Extension of (A, B) -> A + B: direct sum, intersection with Delta(E1) + F1, push by (v, w1, v, w2) -> (v, w1 + w2).
Subspace star(const Subspace& L1, const Subspace& L2, const Metric* m = nullptr);
/// Extension of (A, B) -> A + B^*: star-type construction on L1 + L2^perp pushed by (v, w1 - w2).
Subspace diamond(const Subspace& L1, const Subspace& L2);

/// Closure of AB = 0, BA = 0: L1 cap E contains pi_E(L2) and L2 cap F contains pi_F(L1).
bool chain_member(const Subspace& L1, const Subspace& L2);

struct Strata {
  std::size_t kernel_dim = 0;  // i, so graph(A) lies over Sigma_i
  Subspace kernel;             // L cap E = ker A
  Subspace image;              // pi_F(L) = im A
  Subspace limit;              // ker A + im A, the fixed point lim graph(lambda A)
};
Strata grassmann_strata(const cmat& A);

/// Distance between star(star(a,b),c) and star(a,star(b,c)); empty when some pairing is undefined.
std::optional<double> star_associativity_defect(const Subspace& a, const Subspace& b, const Subspace& c);

}  // namespace dtrans::grass
