#pragma once

#include <vector>

#include "dtrans/exact/polynomial.hpp"

namespace dtrans::exact {

/// Full reduction of f by `basis`. The remainder has no term divisible by a
/// leading term of the basis.
Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& basis, const MonomialOrder& order);

/// Reduced, monic Groebner basis sorted by increasing leading monomial.
/// The zero ideal gives an empty basis.
std::vector<Polynomial> groebner(const std::vector<Polynomial>& gens, const MonomialOrder& order);

/// S-polynomial of two nonzero polynomials.
Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& order);

/// a / b when b divides a exactly; throws std::domain_error otherwise.
Polynomial exact_divide(const Polynomial& a, const Polynomial& b);

}  // namespace dtrans::exact
