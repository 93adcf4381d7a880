#include "dtrans/geom/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace dtrans::geom {

namespace {

// Nodes on [-1, 1], cached per order.
const Rule& reference_rule(std::size_t order) {
  static std::mutex mu;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  std::unique_ptr<gsl_integration_glfixed_table, decltype(&gsl_integration_glfixed_table_free)> t(
      gsl_integration_glfixed_table_alloc(order), &gsl_integration_glfixed_table_free);
  if (!t) throw std::runtime_error("gauss_legendre: table allocation failed");
  Rule r;
  for (std::size_t i = 0; i < order; ++i) {
    double x, w;
    gsl_integration_glfixed_point(-1.0, 1.0, i, &x, &w, t.get());
    r.x.push_back(x);
    r.w.push_back(w);
  }
  return cache.emplace(order, std::move(r)).first->second;
}

cplx ring(const ScalarFn& f, cplx center, double r0, double r1, std::size_t order, std::size_t angular) {
  Rule g = gauss_legendre(order, r0, r1);
  double dt = 2 * std::numbers::pi / angular;
  cplx sum = 0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    cplx s = 0;
    for (std::size_t k = 0; k < angular; ++k) s += f(center + std::polar(g.x[i], (k + 0.5) * dt));
    sum += g.w[i] * g.x[i] * s * dt;
  }
  return sum;
}

}  // namespace

Rule gauss_legendre(std::size_t order, double a, double b) {
  if (order == 0) throw std::invalid_argument("gauss_legendre: order must be positive");
  const Rule& ref = reference_rule(order);
  Rule r;
  double h = 0.5 * (b - a), m = 0.5 * (a + b);
  for (std::size_t i = 0; i < order; ++i) {
    r.x.push_back(m + h * ref.x[i]);
    r.w.push_back(h * ref.w[i]);
  }
  return r;
}

cplx integrate_disk(const ScalarFn& f, cplx center, double radius, const DiskQuadrature& q) {
  return ring(f, center, 0, radius, q.radial_order, q.angular);
}

cplx integrate_disk_singular(const ScalarFn& f, cplx center, double radius, const SingularQuadrature& q) {
  cplx sum = 0;
  double outer = radius;
  for (std::size_t d = 0; d < q.depth; ++d) {
    sum += ring(f, center, 0.5 * outer, outer, q.radial_order, q.angular);
    outer *= 0.5;
  }
  return sum + ring(f, center, 0, outer, q.radial_order, q.angular);
}

cplx integrate_plane_singular(const ScalarFn& f, cplx center, double r0, const SingularQuadrature& q,
                              std::size_t exterior_order) {
  cplx inner = integrate_disk_singular(f, center, r0, q);
  // r = r0 / x, dr = r0 / x^2 dx, x in (0, 1]; split at dyadic x to follow slow decay
  cplx outer = 0;
  double dt = 2 * std::numbers::pi / q.angular;
  double hi = 1.0;
  for (int piece = 0; piece < 12; ++piece) {
    double lo = piece == 11 ? 0.0 : 0.5 * hi;
    Rule g = gauss_legendre(exterior_order, lo, hi);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      double r = r0 / g.x[i];
      cplx s = 0;
      for (std::size_t k = 0; k < q.angular; ++k) s += f(center + std::polar(r, (k + 0.5) * dt));
      outer += g.w[i] * r * (r0 / (g.x[i] * g.x[i])) * s * dt;
    }
    hi = lo;
  }
  return inner + outer;
}

cplx integrate_p1(const FormField& chart0, const FormField& chart1, const DiskQuadrature& q) {
  if (chart0.n != 1 || chart1.n != 1) throw std::invalid_argument("integrate_p1: charts must be one-dimensional");
  auto density = [](const FormField& w) {
    return [f = &w](cplx p) {
      Point z{p};
      return (*f)(z).top_density();
    };
  };
  return integrate_disk(density(chart0), 0, 1, q) + integrate_disk(density(chart1), 0, 1, q);
}

cplx integrate_box(const FormField& w, const std::vector<std::array<double, 4>>& box, std::size_t order) {
  const std::size_t n = w.n;
  if (box.size() != n) throw std::invalid_argument("integrate_box: one rectangle per coordinate");
  std::vector<Rule> re, im;
  for (const auto& b : box) {
    re.push_back(gauss_legendre(order, b[0], b[1]));
    im.push_back(gauss_legendre(order, b[2], b[3]));
  }
  std::vector<std::size_t> idx(2 * n, 0);
  Point z(n);
  cplx sum = 0;
  for (;;) {
    double weight = 1;
    for (std::size_t k = 0; k < n; ++k) {
      z[k] = cplx(re[k].x[idx[2 * k]], im[k].x[idx[2 * k + 1]]);
      weight *= re[k].w[idx[2 * k]] * im[k].w[idx[2 * k + 1]];
    }
    sum += weight * w(z).top_density();
    std::size_t d = 0;
    while (d < 2 * n && ++idx[d] == order) idx[d++] = 0;
    if (d == 2 * n) break;
  }
  return sum;
}

Mask lift_mask(Mask base, std::size_t nb) {
  Mask low = (Mask(1) << nb) - 1;
  return (base & low) | ((base >> nb) << (nb + 1));
}

FiberIntegral fiber_integrate(const FormField& chart0, const FormField& chart1, std::span<const cplx> base,
                              const DiskQuadrature& q) {
  const std::size_t nb = base.size();
  const std::size_t N = nb + 1;
  if (chart0.n != N || chart1.n != N) throw std::invalid_argument("fiber_integrate: charts must be base x P^1");
  const Mask fiber = dz(nb) | dzb(N, nb);
  FiberIntegral out{Form(nb), true};
  Point p(base.begin(), base.end());
  p.push_back(0);
  for (const FormField* w : {&chart0, &chart1}) {
    Rule g = gauss_legendre(q.radial_order, 0, 1);
    double dt = 2 * std::numbers::pi / q.angular;
    for (std::size_t i = 0; i < g.x.size(); ++i)
      for (std::size_t k = 0; k < q.angular; ++k) {
        p[nb] = std::polar(g.x[i], (k + 0.5) * dt);
        Form f = (*w)(p);
        double weight = g.w[i] * g.x[i] * dt;
        for (Mask a = 0; a < out.form.size(); ++a) {
          Mask A = lift_mask(a, nb);
          cplx c = f[A | fiber];
          if (c == cplx(0)) continue;
          out.degree_too_low = false;
          out.form[a] += double(wedge_sign(A, fiber)) * cplx(0, -2) * c * weight;
        }
      }
  }
  return out;
}

FormField fiber_integrate(const FormField& chart0, const FormField& chart1, const DiskQuadrature& q) {
  if (chart0.n < 2) throw std::invalid_argument("fiber_integrate: need a base of positive dimension");
  return FormField{chart0.n - 1,
                   [chart0, chart1, q](std::span<const cplx> z) { return fiber_integrate(chart0, chart1, z, q).form; },
                   {}};
}

}  // namespace dtrans::geom
