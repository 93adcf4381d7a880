#pragma once

#include "dtrans/geom/metric.hpp"
#include "dtrans/geom/quadrature.hpp"

namespace dtrans::geom {

/// Chart j (0..r) of P(C + E) over a base chart with E = C^r trivialized and
/// metric hE: homogeneous vector u with u_j = 1. The total space has the base
/// coordinates first and then the r fiber coordinates in slot order, skipping j.
struct ProjectiveChart {
  MetricField hE;
  std::size_t j = 0;

  std::size_t n_base() const { return hE.n(); }
  std::size_t r() const { return hE.rank(); }
  std::size_t n_total() const { return hE.n() + hE.rank(); }
  /// u as expressions in the total-space variables.
  std::vector<Expr> homogeneous() const;
  /// Ambient metric diag(1, hE) on C + E, as expressions in the total-space variables.
  std::vector<Expr> ambient() const;  // (r+1)^2 entries
};

/// |u|^2 on the tautological line with frame u.
MetricField tautological_metric(const ProjectiveChart& c);
MetricField dual_tautological_metric(const ProjectiveChart& c);
/// Metric on the quotient (C + E)/tau with the frame {e_a : a != j}, realized as
/// the orthogonal complement of tau.
MetricField quotient_metric(const ProjectiveChart& c);

/// L_s: the line spanned by s, metric s^* hE s in the frame s.
MetricField section_line_metric(const MetricField& hE, const std::vector<Expr>& s);
MetricField section_line_dual_metric(const MetricField& hE, const std::vector<Expr>& s);
/// Q_s = E / L_s with frame {e_a : a != j}; valid where s_j != 0.
MetricField section_quotient_metric(const MetricField& hE, const std::vector<Expr>& s, std::size_t j);

/// Pullback of the dual tautological metric of chart 0 along m -> [1 : lambda s(m)].
MetricField pullback_dual_tautological(const MetricField& hE, const std::vector<Expr>& s, cplx lambda);

/// Slot j whose |s_j|^2 h_jj is largest at z, the natural frame choice for Q_s.
std::size_t dominant_slot(const MetricField& hE, const std::vector<Expr>& s, std::span<const cplx> z);

/// A line-bundle metric on P^1 in the charts w and w' = 1/w.
struct P1Atlas {
  MetricField chart0, chart1;
};

/// tau* with frames dual to (1, w) and (w', 1).
P1Atlas p1_dual_tautological();
/// Multiply by a positive function given as f0(w) and f1(w') = f0(1/w').
P1Atlas conformal(const P1Atlas& a, const Expr& f0, const Expr& f1);
/// Five smooth positive functions on P^1 of size about eps, as chart pairs.
std::vector<std::pair<Expr, Expr>> p1_perturbations(double eps);
cplx integrate_c1(const P1Atlas& a, const DiskQuadrature& q = {});

}  // namespace dtrans::geom
