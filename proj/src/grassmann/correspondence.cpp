#include "dtrans/grassmann/correspondence.hpp"

#include <stdexcept>

namespace dtrans::grass {

namespace {

std::size_t numeric_rank(const Eigen::VectorXd& sv) {
  if (sv.size() == 0 || sv(0) == 0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * sv(0)) ++r;
  return r;
}

cmat embed_E(HermSpace s, const cmat& X) {
  cmat out = cmat::Zero(s.dim(), X.cols());
  out.topRows(s.pE) = X;
  return out;
}

cmat embed_F(HermSpace s, const cmat& X) {
  cmat out = cmat::Zero(s.dim(), X.cols());
  out.bottomRows(s.pF) = X;
  return out;
}

cmat block_diag(const cmat& a, const cmat& b) {
  cmat out = cmat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Delta(E1) + F1 inside G = E + F + E + F.
cmat diagonal_frame(HermSpace s) {
  const std::size_t N = s.dim();
  cmat W = cmat::Zero(2 * N, s.pE + 2 * s.pF);
  const double r = 1 / std::sqrt(2.0);
  for (std::size_t i = 0; i < s.pE; ++i) {
    W(i, i) = r;
    W(N + i, i) = r;
  }
  for (std::size_t j = 0; j < s.pF; ++j) {
    W(s.pE + j, s.pE + j) = 1;
    W(N + s.pE + j, s.pE + s.pF + j) = 1;
  }
  return W;
}

// (v, w1, v, w2) -> (v, w1 + sign w2)
cmat theta(HermSpace s, double sign) {
  const std::size_t N = s.dim();
  cmat T = cmat::Zero(N, 2 * N);
  for (std::size_t i = 0; i < s.pE; ++i) T(i, i) = 1;
  for (std::size_t j = 0; j < s.pF; ++j) {
    T(s.pE + j, s.pE + j) = 1;
    T(s.pE + j, N + s.pE + j) = sign;
  }
  return T;
}

DomainCheck first_nonzero(const std::vector<std::pair<std::string, cmat>>& parts) {
  for (const auto& [name, X] : parts)
    if (X.cols() > 0) return {false, name, X.col(0)};
  return {};
}

Subspace push(HermSpace s, const cmat& V, const cmat& H, double sign, std::size_t want) {
  cmat HG = block_diag(H, H);
  cmat X = intersect(V, diagonal_frame(s), HG);
  if (std::size_t(X.cols()) != want)
    throw std::runtime_error("intersection with the diagonal has dimension " + std::to_string(X.cols()) +
                             ", expected " + std::to_string(want));
  return Subspace(s, theta(s, sign) * X, want);
}

}  // namespace

cmat orthonormal_span(const cmat& m) {
  if (m.cols() == 0) return cmat(m.rows(), 0);
  Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(numeric_rank(svd.singularValues()));
}

cmat null_space(const cmat& m, std::size_t cols) {
  if (m.rows() == 0) return cmat::Identity(cols, cols);
  Eigen::JacobiSVD<cmat> svd(m, Eigen::ComputeFullV);
  std::size_t r = numeric_rank(svd.singularValues());
  return svd.matrixV().rightCols(cols - r);
}

cmat complement(const cmat& U, const cmat& H) {
  if (U.cols() == 0) return cmat::Identity(H.rows(), H.cols());
  return null_space(U.adjoint() * H, H.rows());
}

cmat intersect(const cmat& U, const cmat& W, const cmat& H) {
  cmat a = complement(U, H), b = complement(W, H);
  cmat M(a.cols() + b.cols(), H.rows());
  if (a.cols()) M.topRows(a.cols()) = a.adjoint() * H;
  if (b.cols()) M.bottomRows(b.cols()) = b.adjoint() * H;
  return orthonormal_span(null_space(M, H.rows()));
}

// ---- subspaces

Subspace::Subspace(HermSpace ambient, const cmat& spanning, std::optional<std::size_t> dim) : amb_(ambient) {
  if (ambient.pE == 0 || ambient.pF == 0) throw std::invalid_argument("HermSpace: dimensions must be positive");
  if (std::size_t(spanning.rows()) != ambient.dim()) throw std::invalid_argument("Subspace: frame rows must match ambient");
  frame_ = orthonormal_span(spanning);
  if (dim && std::size_t(frame_.cols()) != *dim)
    throw std::invalid_argument("Subspace: spanning set has rank " + std::to_string(frame_.cols()) + ", expected " +
                                std::to_string(*dim));
}

Subspace Subspace::zero(HermSpace s) { return Subspace(s, cmat(s.dim(), 0)); }
Subspace Subspace::E(HermSpace s) { return Subspace(s, embed_E(s, cmat::Identity(s.pE, s.pE))); }
Subspace Subspace::F(HermSpace s) { return Subspace(s, embed_F(s, cmat::Identity(s.pF, s.pF))); }

double Subspace::gram_deviation() const {
  if (frame_.cols() == 0) return 0;
  return (frame_.adjoint() * frame_ - cmat::Identity(frame_.cols(), frame_.cols())).cwiseAbs().maxCoeff();
}

double distance(const Subspace& a, const Subspace& b) {
  if (!(a.ambient() == b.ambient()) || a.dim() != b.dim()) return 1;
  if (a.dim() == 0) return 0;
  cmat r = b.frame() - a.frame() * (a.frame().adjoint() * b.frame());
  Eigen::JacobiSVD<cmat> svd(r);
  return std::min(1.0, svd.singularValues()(0));
}

bool same(const Subspace& a, const Subspace& b, double tol) { return distance(a, b) < tol; }

Subspace complement(const Subspace& L, const Metric& m) {
  return Subspace(L.ambient(), complement(L.frame(), m.H), L.ambient().dim() - L.dim());
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  const std::size_t N = a.ambient().dim();
  return Subspace(a.ambient(), intersect(a.frame(), b.frame(), cmat::Identity(N, N)));
}

Subspace cap_E(const Subspace& L) { return intersect(L, Subspace::E(L.ambient())); }
Subspace cap_F(const Subspace& L) { return intersect(L, Subspace::F(L.ambient())); }

Subspace project_E(const Subspace& L) {
  auto s = L.ambient();
  return Subspace(s, embed_E(s, L.frame().topRows(s.pE)));
}

Subspace project_F(const Subspace& L) {
  auto s = L.ambient();
  return Subspace(s, embed_F(s, L.frame().bottomRows(s.pF)));
}

bool contains(const Subspace& a, const Subspace& b) {
  cmat both(a.ambient().dim(), a.dim() + b.dim());
  both << a.frame(), b.frame();
  return std::size_t(orthonormal_span(both).cols()) == a.dim();
}

Subspace graph(const cmat& A) {
  HermSpace s{std::size_t(A.cols()), std::size_t(A.rows())};
  cmat M(s.dim(), s.pE);
  M << cmat::Identity(s.pE, s.pE), A;
  return Subspace(s, M, s.pE);
}

Subspace cograph(const cmat& B) {
  HermSpace s{std::size_t(B.rows()), std::size_t(B.cols())};
  cmat M(s.dim(), s.pF);
  M << B, cmat::Identity(s.pF, s.pF);
  return Subspace(s, M, s.pF);
}

Subspace rescale(const Subspace& L, cplx lambda) {
  cmat M = L.frame();
  M.bottomRows(L.ambient().pF) *= lambda;
  return Subspace(L.ambient(), M);
}

// ---- operations

DomainCheck star_domain(const Subspace& L1, const Subspace& L2, const Metric* m) {
  if (!(L1.ambient() == L2.ambient())) throw std::invalid_argument("star_domain: different ambients");
  auto s = L1.ambient();
  Metric H = m ? *m : Metric::standard(s);
  cmat Ef = embed_E(s, cmat::Identity(s.pE, s.pE)), Ff = embed_F(s, cmat::Identity(s.pF, s.pF));
  cmat a = intersect(intersect(complement(L1.frame(), H.H), complement(L2.frame(), H.H), H.H), Ef, H.H);
  cmat b = intersect(intersect(L1.frame(), L2.frame(), H.H), Ff, H.H);
  return first_nonzero({{"pi_E(L1) + pi_E(L2) = E", a}, {"L1 cap L2 cap F = 0", b}});
}

DomainCheck diamond_domain(const Subspace& L1, const Subspace& L2) {
  if (!(L1.ambient() == L2.ambient())) throw std::invalid_argument("diamond_domain: different ambients");
  auto s = L1.ambient();
  cmat I = cmat::Identity(s.dim(), s.dim());
  cmat Ef = embed_E(s, cmat::Identity(s.pE, s.pE)), Ff = embed_F(s, cmat::Identity(s.pF, s.pF));
  cmat a = intersect(intersect(complement(L1.frame(), I), L2.frame(), I), Ef, I);
  cmat b = intersect(intersect(L1.frame(), complement(L2.frame(), I), I), Ff, I);
  return first_nonzero({{"L1^perp cap L2 cap E = 0", a}, {"L1 cap L2^perp cap F = 0", b}});
}

Subspace star(const Subspace& L1, const Subspace& L2, const Metric* m) {
  auto s = L1.ambient();
  if (L1.dim() != s.pE || L2.dim() != s.pE) throw std::invalid_argument("star: both subspaces need dimension dim E");
  auto c = star_domain(L1, L2, m);
  if (!c.ok) throw DomainError("star: " + c.failed + " fails", c);
  Metric H = m ? *m : Metric::standard(s);
  return push(s, block_diag(L1.frame(), L2.frame()), H.H, +1, s.pE);
}

Subspace diamond(const Subspace& L1, const Subspace& L2) {
  auto s = L1.ambient();
  if (L1.dim() != s.pE || L2.dim() != s.pF)
    throw std::invalid_argument("diamond: need dim L1 = dim E and dim L2 = dim F");
  auto c = diamond_domain(L1, L2);
  if (!c.ok) throw DomainError("diamond: " + c.failed + " fails", c);
  auto I = Metric::standard(s);
  return push(s, block_diag(L1.frame(), complement(L2, I).frame()), I.H, -1, s.pE);
}

bool chain_member(const Subspace& L1, const Subspace& L2) {
  if (!(L1.ambient() == L2.ambient())) throw std::invalid_argument("chain_member: different ambients");
  return contains(cap_E(L1), project_E(L2)) && contains(cap_F(L2), project_F(L1));
}

Strata grassmann_strata(const cmat& A) {
  HermSpace s{std::size_t(A.cols()), std::size_t(A.rows())};
  cmat K = null_space(A, s.pE);
  cmat R = orthonormal_span(A);
  Subspace ker(s, embed_E(s, K)), img(s, embed_F(s, R));
  cmat both(s.dim(), K.cols() + R.cols());
  both << embed_E(s, K), embed_F(s, R);
  return {std::size_t(K.cols()), ker, img, Subspace(s, both, s.pE)};
}

std::optional<double> star_associativity_defect(const Subspace& a, const Subspace& b, const Subspace& c) {
  if (!star_domain(a, b).ok || !star_domain(b, c).ok) return std::nullopt;
  auto ab = star(a, b), bc = star(b, c);
  if (!star_domain(ab, c).ok || !star_domain(a, bc).ok) return std::nullopt;
  return distance(star(ab, c), star(a, bc));
}

}  // namespace dtrans::grass
