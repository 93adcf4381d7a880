#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dtrans/exact/ideal.hpp"

namespace dtrans::cone {

using exact::GaussRational;
using exact::Ideal;
using exact::Polynomial;
using exact::VarList;

/// Components s_1..s_k of a section in a trivialization over a chart.
struct SectionData {
  VarList base_vars;
  std::vector<Polynomial> components;

  SectionData(VarList vars, std::vector<Polynomial> comps);
  /// Parses each component against `vars`.
  static SectionData parse(const std::vector<std::string>& vars, const std::vector<std::string>& comps);
  Ideal ideal() const { return Ideal(base_vars, components); }
};

/// Ideal in base variables followed by the fiber variables; homogeneous in
/// the fiber variables.
struct ConeIdeal {
  VarList base_vars;
  std::vector<std::string> fiber_vars;
  Ideal ideal;
};

struct MultiplicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MultiplicityOptions {
  unsigned t_max = 24;
  unsigned stable_window = 3;
  unsigned max_local_order = 64;
  std::uint64_t slice_seed = 20240917;
};

struct MultiplicityReport {
  std::vector<GaussRational> point;
  std::int64_t hs_multiplicity = 0;
  std::int64_t cone_fiber_degree = 0;
  bool agree = false;
};

/// Closure of the graph of m -> [s(m)]: variables base + w1..wk.
ConeIdeal rees_ideal(const SectionData& s);
/// P(C + normal cone): variables base + theta + w1..wk.
ConeIdeal normal_cone_ideal(const SectionData& s);

/// Samuel multiplicity of I at `center` along a component of codimension d.
std::int64_t hilbert_samuel_multiplicity(const Ideal& I, const std::vector<GaussRational>& center, unsigned d,
                                         const MultiplicityOptions& opt = {});
/// Degree of the fiber of the projectivized cone over `p` (d = codimension of
/// the component through p).
std::int64_t generic_fiber_degree(const ConeIdeal& cone, const std::vector<GaussRational>& p, unsigned d,
                                  const MultiplicityOptions& opt = {});
MultiplicityReport multiplicity_report(const SectionData& s, const std::vector<GaussRational>& p, unsigned d,
                                       const MultiplicityOptions& opt = {});

/// Smallest a with m^a contained in I near the origin (I must vanish there).
unsigned local_order_bound(const Ideal& I, unsigned max_order);

}  // namespace dtrans::cone
