#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dtrans::geom {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

/// Bits 0..n-1 are dz_1..dz_n, bits n..2n-1 are dzb_1..dzb_n. A mask names the
/// wedge of its basis 1-forms in increasing bit order.
using Mask = std::uint32_t;

constexpr Mask dz(std::size_t k) { return Mask(1) << k; }
constexpr Mask dzb(std::size_t n, std::size_t k) { return Mask(1) << (n + k); }

/// e_a ^ e_b = wedge_sign(a, b) e_{a|b}; 0 when a and b overlap.
int wedge_sign(Mask a, Mask b);
int holomorphic_degree(Mask a, std::size_t n);
int antiholomorphic_degree(Mask a, std::size_t n);
inline int degree(Mask a) { return __builtin_popcount(a); }

/// Coordinate chart: product of rectangles [re_lo, re_hi] x [im_lo, im_hi].
struct Chart {
  std::size_t n = 1;
  std::vector<std::string> names;
  std::vector<std::array<double, 4>> box;

  static Chart disk_box(std::size_t n, double radius);
  bool contains(std::span<const cplx> z) const;
};

class Form {
 public:
  Form() = default;
  explicit Form(std::size_t n);
  static Form scalar(std::size_t n, cplx v);
  static Form basis(std::size_t n, Mask m, cplx v = 1);

  std::size_t n() const { return n_; }
  std::size_t size() const { return c_.size(); }
  cplx operator[](Mask m) const { return c_[m]; }
  cplx& operator[](Mask m) { return c_[m]; }

  Form& operator+=(const Form& o);
  Form& operator-=(const Form& o);
  Form& operator*=(cplx s);
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(cplx s, Form a) { return a *= s; }

  Form wedge(const Form& o) const;
  /// Part of bidegree (p, q).
  Form component(int p, int q) const;
  /// Part of total degree k.
  Form degree_part(int k) const;
  Form conj() const;

  double max_abs() const;
  /// Largest coefficient of bidegree (p, q) with p != q.
  double max_off_diagonal() const;
  /// Coefficient of dx_1 dy_1 ... dx_n dy_n in the top-degree part.
  cplx top_density() const;

  std::string str(double tol = 1e-14) const;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> c_;
};

/// Matrix-valued forms. With a grading the product is the super product
/// (w (x) a)(e (x) b) = (-1)^{|a||e|} (w ^ e) (x) ab.
class MatForm {
 public:
  MatForm() = default;
  MatForm(std::size_t n, std::size_t r);

  std::size_t n() const { return n_; }
  std::size_t rank() const { return r_; }
  const Eigen::MatrixXcd& operator[](Mask m) const { return m_[m]; }
  Eigen::MatrixXcd& operator[](Mask m) { return m_[m]; }

  MatForm& operator+=(const MatForm& o);
  MatForm& operator-=(const MatForm& o);
  MatForm& operator*=(cplx s);
  friend MatForm operator+(MatForm a, const MatForm& b) { return a += b; }
  friend MatForm operator-(MatForm a, const MatForm& b) { return a -= b; }
  friend MatForm operator*(cplx s, MatForm a) { return a *= s; }

  /// `grading` is the diagonal of epsilon (+1 even, -1 odd); empty means all even.
  MatForm product(const MatForm& o, std::span<const double> grading = {}) const;
  Form trace() const;
  Form supertrace(std::span<const double> grading) const;
  /// Largest entry over masks of positive degree.
  double nilpotent_norm() const;
  bool empty_mask(Mask m) const;

 private:
  std::size_t n_ = 0, r_ = 0;
  std::vector<Eigen::MatrixXcd> m_;
};

/// Form-valued function on a chart.
struct FormField {
  std::size_t n = 1;
  std::function<Form(std::span<const cplx>)> eval;
  Chart chart;

  Form operator()(std::span<const cplx> z) const;
};

/// Pullback along a holomorphic map with Jacobian J (target dim x source dim):
/// dz_a -> sum_b J(a, b) dm_b, dzb_a -> sum_b conj(J(a, b)) dmb_b.
Form pullback_holomorphic(const Form& w, const Eigen::MatrixXcd& J);

enum class ExteriorOp { D, Del, DelBar };

/// Sixth-order central differences of the coefficient functions.
Form exterior(const FormField& w, std::span<const cplx> z, ExteriorOp op, double step = 1e-3);
FormField exterior(const FormField& w, ExteriorOp op, double step = 1e-3);
FormField wedge(const FormField& a, const FormField& b);

}  // namespace dtrans::geom
