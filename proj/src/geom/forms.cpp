#include "dtrans/geom/forms.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dtrans::geom {

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  // count pairs (i in a, j in b) with i > j
  int swaps = 0;
  while (b) {
    Mask low = b & -b;
    swaps += __builtin_popcount(a & ~((low << 1) - 1));
    b &= b - 1;
  }
  return swaps % 2 ? -1 : 1;
}

int holomorphic_degree(Mask a, std::size_t n) { return __builtin_popcount(a & ((Mask(1) << n) - 1)); }
int antiholomorphic_degree(Mask a, std::size_t n) { return __builtin_popcount(a >> n); }

Chart Chart::disk_box(std::size_t n, double radius) {
  Chart c;
  c.n = n;
  for (std::size_t k = 0; k < n; ++k) {
    c.names.push_back("z" + std::to_string(k + 1));
    c.box.push_back({-radius, radius, -radius, radius});
  }
  return c;
}

bool Chart::contains(std::span<const cplx> z) const {
  if (z.size() != n) return false;
  for (std::size_t k = 0; k < box.size(); ++k) {
    const auto& b = box[k];
    if (z[k].real() < b[0] || z[k].real() > b[1] || z[k].imag() < b[2] || z[k].imag() > b[3]) return false;
  }
  return true;
}

// ---- Form

Form::Form(std::size_t n) : n_(n), c_(std::size_t(1) << (2 * n)) {
  if (n == 0 || n > 8) throw std::invalid_argument("Form: dimension must be in 1..8");
}

Form Form::scalar(std::size_t n, cplx v) {
  Form f(n);
  f.c_[0] = v;
  return f;
}

Form Form::basis(std::size_t n, Mask m, cplx v) {
  Form f(n);
  f.c_.at(m) = v;
  return f;
}

Form& Form::operator+=(const Form& o) {
  if (o.n_ != n_) throw std::invalid_argument("Form: dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Form& Form::operator-=(const Form& o) {
  if (o.n_ != n_) throw std::invalid_argument("Form: dimension mismatch");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Form& Form::operator*=(cplx s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Form Form::wedge(const Form& o) const {
  if (o.n_ != n_) throw std::invalid_argument("Form: dimension mismatch");
  Form out(n_);
  for (Mask a = 0; a < c_.size(); ++a) {
    if (c_[a] == cplx(0)) continue;
    for (Mask b = 0; b < c_.size(); ++b) {
      if (o.c_[b] == cplx(0)) continue;
      int s = wedge_sign(a, b);
      if (s) out.c_[a | b] += double(s) * c_[a] * o.c_[b];
    }
  }
  return out;
}

Form Form::component(int p, int q) const {
  Form out(n_);
  for (Mask a = 0; a < c_.size(); ++a)
    if (holomorphic_degree(a, n_) == p && antiholomorphic_degree(a, n_) == q) out.c_[a] = c_[a];
  return out;
}

Form Form::degree_part(int k) const {
  Form out(n_);
  for (Mask a = 0; a < c_.size(); ++a)
    if (degree(a) == k) out.c_[a] = c_[a];
  return out;
}

Form Form::conj() const {
  // conj(dz_I ^ dzb_J) = dzb_I ^ dz_J, then reorder to canonical position
  Form out(n_);
  Mask low = (Mask(1) << n_) - 1;
  for (Mask a = 0; a < c_.size(); ++a) {
    if (c_[a] == cplx(0)) continue;
    Mask I = a & low, J = a >> n_;
    int s = wedge_sign(I << n_, J);
    out.c_[J | (I << n_)] += double(s) * std::conj(c_[a]);
  }
  return out;
}

double Form::max_abs() const {
  double m = 0;
  for (const auto& x : c_) m = std::max(m, std::abs(x));
  return m;
}

double Form::max_off_diagonal() const {
  double m = 0;
  for (Mask a = 0; a < c_.size(); ++a)
    if (holomorphic_degree(a, n_) != antiholomorphic_degree(a, n_)) m = std::max(m, std::abs(c_[a]));
  return m;
}

cplx Form::top_density() const {
  // dz_1..dz_n dzb_1..dzb_n = (-1)^{n(n-1)/2} prod (dz_k ^ dzb_k), dz ^ dzb = -2i dx ^ dy
  std::size_t n = n_;
  cplx f = (n * (n - 1) / 2) % 2 ? -1.0 : 1.0;
  for (std::size_t k = 0; k < n; ++k) f *= cplx(0, -2);
  return f * c_.back();
}

std::string Form::str(double tol) const {
  std::ostringstream os;
  bool first = true;
  for (Mask a = 0; a < c_.size(); ++a) {
    if (std::abs(c_[a]) <= tol) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[a].real() << (c_[a].imag() < 0 ? "" : "+") << c_[a].imag() << "i)";
    for (std::size_t k = 0; k < 2 * n_; ++k)
      if (a & (Mask(1) << k)) os << (k < n_ ? " dz" : " dzb") << (k % n_) + 1;
  }
  return first ? "0" : os.str();
}

// ---- MatForm

MatForm::MatForm(std::size_t n, std::size_t r) : n_(n), r_(r), m_(std::size_t(1) << (2 * n)) {
  if (n == 0 || n > 8) throw std::invalid_argument("MatForm: dimension must be in 1..8");
  for (auto& x : m_) x = Eigen::MatrixXcd::Zero(r, r);
}

MatForm& MatForm::operator+=(const MatForm& o) {
  if (o.n_ != n_ || o.r_ != r_) throw std::invalid_argument("MatForm: shape mismatch");
  for (std::size_t i = 0; i < m_.size(); ++i) m_[i] += o.m_[i];
  return *this;
}

MatForm& MatForm::operator-=(const MatForm& o) {
  if (o.n_ != n_ || o.r_ != r_) throw std::invalid_argument("MatForm: shape mismatch");
  for (std::size_t i = 0; i < m_.size(); ++i) m_[i] -= o.m_[i];
  return *this;
}

MatForm& MatForm::operator*=(cplx s) {
  for (auto& x : m_) x *= s;
  return *this;
}

bool MatForm::empty_mask(Mask m) const { return m_[m].isZero(0); }

MatForm MatForm::product(const MatForm& o, std::span<const double> grading) const {
  if (o.n_ != n_ || o.r_ != r_) throw std::invalid_argument("MatForm: shape mismatch");
  if (!grading.empty() && grading.size() != r_) throw std::invalid_argument("MatForm: grading size");
  MatForm out(n_, r_);
  std::vector<Mask> left, right;
  for (Mask a = 0; a < m_.size(); ++a) {
    if (!empty_mask(a)) left.push_back(a);
    if (!o.empty_mask(a)) right.push_back(a);
  }
  for (Mask a : left) {
    // epsilon M epsilon flips the sign of the odd (off-diagonal block) entries
    Eigen::MatrixXcd flipped = m_[a];
    if (!grading.empty())
      for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < r_; ++j) flipped(i, j) *= grading[i] * grading[j];
    for (Mask b : right) {
      int s = wedge_sign(a, b);
      if (!s) continue;
      const Eigen::MatrixXcd& L = degree(b) % 2 ? flipped : m_[a];
      out.m_[a | b] += double(s) * (L * o.m_[b]);
    }
  }
  return out;
}

Form MatForm::trace() const {
  Form f(n_);
  for (Mask a = 0; a < m_.size(); ++a) f[a] = m_[a].trace();
  return f;
}

Form MatForm::supertrace(std::span<const double> grading) const {
  if (grading.size() != r_) throw std::invalid_argument("MatForm: grading size");
  Form f(n_);
  for (Mask a = 0; a < m_.size(); ++a) {
    cplx s = 0;
    for (std::size_t i = 0; i < r_; ++i) s += grading[i] * m_[a](i, i);
    f[a] = s;
  }
  return f;
}

double MatForm::nilpotent_norm() const {
  double m = 0;
  for (Mask a = 1; a < m_.size(); ++a) m = std::max(m, m_[a].cwiseAbs().maxCoeff());
  return m;
}

Form pullback_holomorphic(const Form& w, const Eigen::MatrixXcd& J) {
  const std::size_t N = w.n(), n = J.cols();
  if (std::size_t(J.rows()) != N) throw std::invalid_argument("pullback_holomorphic: Jacobian rows must match form dimension");
  std::vector<Form> img(2 * N, Form(n));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      img[a][dz(b)] = J(a, b);
      img[N + a][dzb(n, b)] = std::conj(J(a, b));
    }
  Form out(n);
  for (Mask A = 0; A < w.size(); ++A) {
    if (w[A] == cplx(0)) continue;
    if (degree(A) > int(2 * n)) continue;
    Form t = Form::scalar(n, w[A]);
    for (std::size_t k = 0; k < 2 * N && t.max_abs() > 0; ++k)
      if (A & (Mask(1) << k)) t = t.wedge(img[k]);
    out += t;
  }
  return out;
}

// ---- fields

Form FormField::operator()(std::span<const cplx> z) const {
  if (z.size() != n) throw std::invalid_argument("FormField: point dimension mismatch");
  if (!chart.box.empty() && !chart.contains(z)) throw std::out_of_range("FormField: point outside chart domain");
  return eval(z);
}

Form exterior(const FormField& w, std::span<const cplx> z, ExteriorOp op, double step) {
  const std::size_t n = w.n;
  static constexpr double c[3] = {45.0, -9.0, 1.0};
  Form out(n);
  Point p(z.begin(), z.end());
  for (std::size_t k = 0; k < n; ++k) {
    Form dx(n), dy(n);
    for (int dir = 0; dir < 2; ++dir) {
      Form& acc = dir ? dy : dx;
      cplx e = dir ? cplx(0, step) : cplx(step, 0);
      for (int j = 1; j <= 3; ++j) {
        p[k] = z[k] + double(j) * e;
        Form fp = w(p);
        p[k] = z[k] - double(j) * e;
        Form fm = w(p);
        acc += (c[j - 1] / (60.0 * step)) * (fp - fm);
      }
      p[k] = z[k];
    }
    // d/dz = (d/dx - i d/dy)/2, d/dzb = (d/dx + i d/dy)/2
    for (int bar = 0; bar < 2; ++bar) {
      if (op == ExteriorOp::Del && bar) continue;
      if (op == ExteriorOp::DelBar && !bar) continue;
      Mask e = bar ? dzb(n, k) : dz(k);
      cplx iy = bar ? cplx(0, 1) : cplx(0, -1);
      for (Mask a = 0; a < dx.size(); ++a) {
        int s = wedge_sign(e, a);
        if (!s) continue;
        out[e | a] += double(s) * 0.5 * (dx[a] + iy * dy[a]);
      }
    }
  }
  return out;
}

FormField exterior(const FormField& w, ExteriorOp op, double step) {
  FormField out{w.n, nullptr, w.chart};
  out.eval = [w, op, step](std::span<const cplx> z) { return exterior(w, z, op, step); };
  return out;
}

FormField wedge(const FormField& a, const FormField& b) {
  if (a.n != b.n) throw std::invalid_argument("wedge: dimension mismatch");
  return FormField{a.n, [a, b](std::span<const cplx> z) { return a(z).wedge(b(z)); }, a.chart};
}

}  // namespace dtrans::geom
