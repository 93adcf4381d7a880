#pragma once

#include <functional>

#include "dtrans/geom/forms.hpp"

namespace dtrans::geom {

using ScalarFn = std::function<cplx(cplx)>;

struct Rule {
  std::vector<double> x, w;
};

/// Gauss-Legendre nodes and weights on [a, b].
Rule gauss_legendre(std::size_t order, double a, double b);

struct DiskQuadrature {
  std::size_t radial_order = 32;
  std::size_t angular = 64;  // trapezoid points, spectrally accurate for periodic integrands
};

/// Integral of f over |w - center| <= radius against dA = dx dy.
cplx integrate_disk(const ScalarFn& f, cplx center, double radius, const DiskQuadrature& q = {});

struct SingularQuadrature {
  std::size_t radial_order = 16;
  std::size_t angular = 64;
  std::size_t depth = 24;  // dyadic annuli toward the center
};

/// Same integral for f with an integrable singularity at `center`.
cplx integrate_disk_singular(const ScalarFn& f, cplx center, double radius, const SingularQuadrature& q = {});
/// Whole plane: singular disk of radius r0 around `center`, then the exterior
/// through r = r0 / x. f must decay faster than |w|^-2.
cplx integrate_plane_singular(const ScalarFn& f, cplx center, double r0, const SingularQuadrature& q = {},
                              std::size_t exterior_order = 48);

/// Integral over P^1 of a 2-form given in the charts w and w' = 1/w, each over its unit disk.
cplx integrate_p1(const FormField& chart0, const FormField& chart1, const DiskQuadrature& q = {});

/// Integral over a box in C^n of the top-degree part of a form (tensor Gauss-Legendre).
cplx integrate_box(const FormField& w, const std::vector<std::array<double, 4>>& box, std::size_t order);

struct FiberIntegral {
  Form form;
  /// no coefficient carried a dw ^ dwb factor
  bool degree_too_low = false;
};

/// Integration along the P^1 fiber of the trivial fibration base x P^1. Both fields
/// live on base x chart with the fiber coordinate last (w in chart 0, w' = 1/w in chart 1).
FiberIntegral fiber_integrate(const FormField& chart0, const FormField& chart1, std::span<const cplx> base,
                              const DiskQuadrature& q = {});
FormField fiber_integrate(const FormField& chart0, const FormField& chart1, const DiskQuadrature& q = {});

/// Total-space mask of a base mask when one fiber coordinate is appended.
Mask lift_mask(Mask base, std::size_t n_base);

}  // namespace dtrans::geom
