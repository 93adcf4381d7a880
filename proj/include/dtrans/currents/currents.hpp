#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dtrans/geom/bundles.hpp"

namespace dtrans::currents {

using geom::cplx;
using geom::Expr;
using geom::Form;
using geom::FormField;
using geom::Mask;
using geom::Point;

/// Smooth form with compact support in a product of disks. Coefficients are
/// expressions valid on the support; outside it the form is zero.
class TestForm {
 public:
  TestForm(std::size_t n, std::vector<std::pair<Mask, Expr>> coefficients, std::vector<cplx> centers,
           std::vector<double> radii, std::string id = {});

  /// e * exp(-1/(1 - |z - c|^2/R^2)) * (1 + Re(conj(slope) (z - c))): a 0-form on C with value 1 at c.
  static TestForm bump(cplx center, double radius, cplx slope = 0, std::string id = {});
  /// Product of one-variable bumps, a 0-form on C^n.
  static TestForm product_bump(const std::vector<cplx>& centers, const std::vector<double>& radii, std::string id = {});

  std::size_t n() const { return n_; }
  std::pair<int, int> bidegree() const { return bideg_; }
  const std::string& id() const { return id_; }
  const std::vector<cplx>& centers() const { return centers_; }
  const std::vector<double>& radii() const { return radii_; }
  const std::vector<std::pair<Mask, Expr>>& coefficients() const { return coef_; }

  bool in_support(std::span<const cplx> z) const;
  Form operator()(std::span<const cplx> z) const;
  FormField field() const;

  /// Symbolic d d-bar, same support.
  TestForm ddbar() const;
  /// this ^ dz_I dzb_J
  TestForm wedge_basis(Mask m) const;
  TestForm scaled(cplx a) const;
  /// Sum of two forms with the same support.
  TestForm plus(const TestForm& o) const;

 private:
  std::size_t n_;
  std::vector<std::pair<Mask, Expr>> coef_;
  std::vector<cplx> centers_;
  std::vector<double> radii_;
  std::string id_;
  std::pair<int, int> bideg_;
  std::shared_ptr<const geom::Tape> tape_;
};

struct PairingQuadrature {
  std::size_t radial_order = 64;
  std::size_t angular = 128;
  std::size_t singular_order = 16;
  std::size_t depth = 24;
  /// depth-doubling agreement required for log-singular pairings
  double certify_rel = 1e-6;
};

class NonConvergent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pairing functional on test forms of bidegree = bidimension.
struct Current {
  std::string label;
  std::size_t n = 1;
  std::pair<int, int> bidimension{0, 0};
  std::function<cplx(const TestForm&)> pair;

  cplx operator()(const TestForm& eta) const;
};

/// Sum of multiplicity-weighted integration currents over affine subspaces
/// base + span(dirs); points have no directions.
struct Stratum {
  Point base;
  std::vector<Point> dirs;
  int multiplicity = 1;
};
Current analytic_current(std::size_t n, std::vector<Stratum> strata, std::size_t order = 48);
Current point_current(std::size_t n, const std::vector<std::pair<Point, int>>& points);

/// Smooth form w of bidegree (a, b) on C^n as a current: eta -> integral of w ^ eta.
Current form_current(const FormField& w, std::pair<int, int> bidegree, const PairingQuadrature& q = {},
                     std::vector<cplx> avoid = {});
/// Locally integrable g on C (a (1,1)-dimensional current) with declared singular points.
Current l1_current(std::function<cplx(cplx)> g, std::vector<cplx> singular, const PairingQuadrature& q = {},
                   std::string label = "g");

Current scaled(const Current& T, cplx a);

/// (dd-bar T)(eta) := T(dd-bar eta).
cplx ddbar_pair(const Current& T, const TestForm& eta);

/// Integral of g over a disk with singular refinement, certified by depth doubling.
cplx integrate_l1(const std::function<cplx(cplx)>& g, cplx center, double radius, const std::vector<cplx>& singular,
                  const PairingQuadrature& q = {});

/// Two-form fields on each chart j = 0..r of P(C + E) (layout of geom::ProjectiveChart).
struct FiberModel {
  std::size_t n_base = 1, r = 1;
  std::vector<FormField> charts;
};
/// c_degree of a metric built per chart, e.g. geom::dual_tautological_metric.
FiberModel chern_model(const geom::MetricField& hE, const std::function<geom::MetricField(const geom::ProjectiveChart&)>& metric,
                       int degree);

/// (lambda s)^* w through m -> [1 : lambda s(m)], chart chosen per point by the largest homogeneous coordinate.
FormField pullback_family(const FiberModel& model, const std::vector<Expr>& s, cplx lambda);

struct SweepPoint {
  double lambda;
  cplx value;
};

struct WeakLimit {
  cplx limit;
  double alpha = 0;       // infinity for a constant sequence
  double residual = 0;    // max model misfit / spread
  bool extrapolated = false;
  bool oscillatory = false;
  std::string note;
};

/// Fit value = L + c lambda^-alpha; refuses (extrapolated = false, limit = last value)
/// when the fit residual exceeds `max_residual` of the spread or the tail oscillates.
WeakLimit weak_limit(const std::vector<SweepPoint>& sweep, double max_residual = 0.1);

struct Term {
  double sign;
  Current current;
};

struct ResidualRecord {
  std::string test_form_id;
  cplx lhs, rhs;
  double abs_residual, rel_residual;
};

/// |sum sign * term(eta) - ddbar_pair(T, eta)| per test form.
std::vector<ResidualRecord> transgression_residual(const std::vector<Term>& lhs, const Current& T,
                                                   const std::vector<TestForm>& tests);

/// Fiber potential for M = point, E = C: (i/pi) (1/pi) integral over t of
/// log|t - 1| |v|^2 / (1 + |v|^2 |t|^2)^2, a function of |v| only.
cplx point_fiber_potential(double abs_v, const geom::SingularQuadrature& q = {});
/// The same potential as an l1 current singular at 0, memoized by |v|; test forms
/// centered at 0 reuse radii across angles.
Current point_fiber_potential_current(const PairingQuadrature& pq = {}, const geom::SingularQuadrature& q = {});

}  // namespace dtrans::currents
