#include "dtrans/exact/gauss_rational.hpp"

#include <ostream>
#include <stdexcept>

namespace dtrans::exact {

GaussRational GaussRational::inverse() const {
  mpq_class n = norm();
  if (sgn(n) == 0) throw std::domain_error("GaussRational: division by zero");
  return {re_ / n, -im_ / n};
}

GaussRational& GaussRational::operator*=(const GaussRational& o) {
  mpq_class r = re_ * o.re_ - im_ * o.im_;
  mpq_class m = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(m);
  return *this;
}

std::string GaussRational::str() const {
  if (is_real()) return re_.get_str();
  std::string out = "(" + re_.get_str();
  out += sgn(im_) < 0 ? "-" : "+";
  out += mpq_class(abs(im_)).get_str();
  out += "*i)";
  return out;
}

std::ostream& operator<<(std::ostream& os, const GaussRational& c) { return os << c.str(); }

}  // namespace dtrans::exact
