#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "dtrans/cstar/action.hpp"

using namespace dtrans::cstar;
using dtrans::exact::parse_polynomial;

namespace {

cvec vec(std::initializer_list<cplx> v) {
  cvec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v) out[i++] = x;
  return out;
}

WeightedAction line_action(std::vector<unsigned> weights) {
  return WeightedAction(std::vector<unsigned>(weights.size(), 1), weights);
}

}  // namespace

TEST_CASE("action ideals") {
  auto I = action_ideal(line_action({0, 1}));
  CHECK(I == Ideal(I.vars(), {parse_polynomial("mu*v0_0", I.vars()), parse_polynomial("lam*v1_0", I.vars())}));
  auto J = action_ideal(line_action({0, 1, 2}));
  CHECK(J == Ideal(J.vars(), {parse_polynomial("mu^2*v0_0", J.vars()), parse_polynomial("mu*lam*v1_0", J.vars()),
                              parse_polynomial("lam^2*v2_0", J.vars())}));
  auto K = action_ideal(line_action({0, 3}));
  CHECK(K == Ideal(K.vars(), {parse_polynomial("mu^3*v0_0", K.vars()), parse_polynomial("lam^3*v1_0", K.vars())}));
  CHECK_THROWS(WeightedAction({1, 1}, {1, 2}));
  CHECK_THROWS(WeightedAction({1, 1}, {0, 0}));
}

TEST_CASE("fundamental equations") {
  auto a = line_action({0, 1});
  auto sys = fundamental_equations(a);
  REQUIRE(sys.size() == 3);
  // singleton intervals give w_i ^ v_i = 0, which is empty for one-dimensional blocks
  CHECK(sys[0].equations.empty());
  auto vars = action_vars(a);
  REQUIRE(sys[1].equations.size() == 1);
  CHECK(sys[1].equations[0] == parse_polynomial("mu*w0_0*v1_0 - lam*w1_0*v0_0", vars));

  for (std::size_t k = 0; k <= 5; ++k) {
    std::vector<unsigned> w(k + 1);
    for (std::size_t j = 0; j <= k; ++j) w[j] = static_cast<unsigned>(j * j + j);
    auto act = line_action(w);
    CHECK(fundamental_equations(act).size() == (k + 2) * (k + 1) / 2);
  }
  // blocks of dimension two expand coordinate-wise
  WeightedAction b({2, 1}, {0, 2});
  auto s2 = fundamental_equations(b);
  CHECK(s2.front().equations.size() == 1);
  CHECK(s2[1].equations.size() == 3);
}

TEST_CASE("graph substitution and symmetry") {
  for (auto w : {std::vector<unsigned>{0}, {0, 1}, {0, 1, 2}, {0, 1, 3}, {0, 2, 3, 7}}) {
    auto a = line_action(w);
    CHECK(graph_substitution_residuals(a, fundamental_equations(a)) == 0);
    CHECK(symmetric_under_involution(a));
  }
  WeightedAction b({2, 1, 2}, {0, 1, 4});
  CHECK(graph_substitution_residuals(b, fundamental_equations(b)) == 0);
  CHECK(symmetric_under_involution(b));
  CHECK(b.reversed().weights() == std::vector<unsigned>{0, 3, 4});
}

TEST_CASE("exceptional components") {
  auto c1 = exceptional_components(line_action({0, 1}));
  REQUIRE(c1.size() == 4);
  CHECK(label(c1[0]) == "C_0^inf");
  CHECK(label(c1[1]) == "C_1^0");
  CHECK((c1[2].slice_only && label(c1[2]) == "C_1^inf"));
  CHECK((c1[3].slice_only && label(c1[3]) == "C_0^0"));
  auto c2 = exceptional_components(line_action({0, 1, 2}));
  std::vector<std::string> proper;
  for (const auto& c : c2)
    if (!c.slice_only) proper.push_back(label(c));
  CHECK(proper == std::vector<std::string>{"C_0^inf", "C_1^inf", "C_1^0", "C_2^0"});
  CHECK(exceptional_components(line_action({0})).empty());
  WeightedAction b({2, 1, 3}, {0, 1, 5});
  for (const auto& c : exceptional_components(b)) {
    CHECK(c.multiplicity == 1);
    CHECK(dense_stratum_dimension(b, c) == b.dim() - 1);
    CHECK(c.dimension == b.dim() - 1);
  }
}

TEST_CASE("limit classification") {
  auto a = line_action({0, 1});
  auto r = classify_limit(a, vec({1, 1}), Direction::ToInfinity);
  CHECK(r.index == 1);
  CHECK(chordal_distance(r.limit, vec({0, 1})) < 1e-15);
  CHECK(r.validated);
  auto b = line_action({0, 1, 2, 3});
  auto r0 = classify_limit(b, vec({1, 0, 1, 0}), Direction::ToZero);
  CHECK(r0.index == 0);
  CHECK(chordal_distance(r0.limit, vec({1, 0, 0, 0})) < 1e-15);
  for (auto dir : {Direction::ToZero, Direction::ToInfinity}) {
    auto f = classify_limit(b, vec({0, 0, 0, 1}), dir);
    CHECK(f.index == 3);
    CHECK(chordal_distance(f.limit, f.input) == 0);
  }
  // orbit invariance
  cvec v = vec({{1, 2}, {0.5, -1}, 0, {3, 1}});
  for (double lam : {0.5, 3.0, 17.0})
    for (auto dir : {Direction::ToZero, Direction::ToInfinity}) {
      auto p = classify_limit(b, v, dir), q = classify_limit(b, b.apply(lam, v), dir);
      CHECK(p.index == q.index);
      CHECK(chordal_distance(p.limit, q.limit) < 1e-14);
    }
  // fixed points are exactly the single-block points
  CHECK(chordal_distance(classify_limit(b, vec({0, 2, 0, 0}), Direction::ToZero).limit, vec({0, 2, 0, 0})) == 0);
  CHECK(chordal_distance(classify_limit(b, v, Direction::ToZero).limit, v) > 0.1);
}

TEST_CASE("graph closure verification") {
  for (auto w : {std::vector<unsigned>{0, 1}, {0, 1, 2}}) {
    auto rep = verify_graph_closure(line_action(w), 100, 42);
    CHECK(rep.symbolic_nonzero == 0);
    CHECK(rep.max_distance < 1e-3);
  }
  auto vac = verify_graph_closure(line_action({0}), 100, 42);
  CHECK(vac.symbolic_nonzero == 0);
  CHECK(vac.per_component.empty());
  auto blocks = verify_graph_closure(WeightedAction({2, 1, 2}, {0, 1, 3}), 50, 3);
  CHECK(blocks.symbolic_nonzero == 0);
  CHECK(blocks.max_distance < 1e-3);
}

TEST_CASE("empirical limit sets") {
  // constant fixed section: every sample is the section itself
  auto a = line_action({0, 1});
  auto fixed = empirical_limit_set(a, [](cplx) { return vec({0, 1}); }, {0.1, 0.2}, {10.0, 1e3});
  for (const auto& s : fixed) {
    CHECK(chordal_distance(s.coords, vec({0, 1})) < 1e-15);
    CHECK(s.cluster == 0);
  }
  // smooth point: all limits stay on the single line, and z = 0 is the fixed point [1:0]
  auto line = empirical_limit_set(a, [](cplx z) { return vec({1, z}); }, {0.0, 1e-3, 1e-2}, {1e1, 1e2});
  for (const auto& s : line) CHECK(s.residual == 0);
  CHECK(chordal_distance(line[0].coords, vec({1, 0})) == 0);

  std::ostringstream csv;
  write_limit_csv(csv, line);
  CHECK(csv.str().rfind("param_re,param_im,lambda,block_pair,x0_re,x0_im,x1_re,x1_im,cluster_id\n", 0) == 0);
  std::ostringstream empty;
  write_limit_csv(empty, {});
  CHECK(empty.str() == "param_re,param_im,lambda,block_pair,cluster_id\n");
}

TEST_CASE("three limit lines of a weighted section") {
  auto a = line_action({0, 1, 2, 3});
  std::vector<cplx> grid, lambdas;
  for (int k = 8; k <= 40; ++k)
    for (int ph = 0; ph < 8; ++ph) grid.push_back(std::polar(std::pow(10.0, -k / 8.0), ph * M_PI / 4));
  for (int j = 0; j <= 64; ++j) lambdas.push_back(std::pow(10.0, j / 4.0));
  auto samples = empirical_limit_set(
      a, [](cplx z) { return vec({1.0 + z, z * z, std::pow(z, 5), std::pow(z, 9)}); }, grid, lambdas);
  auto cover = line_coverage(a, samples, 1e-3);
  REQUIRE(cover.size() == 3);
  for (const auto& c : cover) {
    MESSAGE("line " << c.block << ": " << c.interior_points << " points, best residual " << c.best_residual);
    CHECK(c.interior_points >= 10);
  }
}
