#include "annulus/laurent.hpp"

#include <algorithm>
#include <stdexcept>

namespace annulus {

LaurentPolynomial::LaurentPolynomial(int lo, std::vector<cplx> coeffs)
    : lo_(lo), hi_(lo + static_cast<int>(coeffs.size()) - 1), c_(std::move(coeffs)) {
  if (c_.empty()) throw std::invalid_argument("LaurentPolynomial needs at least one coefficient");
}

LaurentPolynomial LaurentPolynomial::zero(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("LaurentPolynomial window needs lo <= hi");
  return LaurentPolynomial(lo, std::vector<cplx>(static_cast<std::size_t>(hi - lo + 1)));
}

LaurentPolynomial LaurentPolynomial::monomial(int n, cplx c) { return LaurentPolynomial(n, {c}); }

cplx LaurentPolynomial::coeff(int n) const noexcept {
  if (n < lo_ || n > hi_) return {};
  return c_[static_cast<std::size_t>(n - lo_)];
}

cplx LaurentPolynomial::operator()(cplx z) const {
  // Horner separately on the z and 1/z halves so that neither branch
  // multiplies large powers against small coefficients.
  cplx pos{};
  for (int n = hi_; n >= std::max(lo_, 0); --n) pos = pos * z + coeff(n);
  if (lo_ > 0) {
    for (int n = 0; n < lo_; ++n) pos *= z;
  }
  cplx neg{};
  if (lo_ < 0) {
    const cplx w = 1.0 / z;
    const int top = std::min(hi_, -1);
    for (int n = lo_; n <= top; ++n) neg = neg * w + coeff(n);
    // neg = sum c_n w^{top - n}
    neg *= std::pow(w, -top);
  }
  return pos + neg;
}

LaurentPolynomial LaurentPolynomial::derivative() const {
  LaurentPolynomial d = zero(lo_ - 1, hi_ - 1);
  for (int n = lo_; n <= hi_; ++n) d[n - 1] = static_cast<double>(n) * coeff(n);
  return d;
}

LaurentPolynomial LaurentPolynomial::window(int lo, int hi) const {
  LaurentPolynomial w = zero(lo, hi);
  for (int n = std::max(lo, lo_); n <= std::min(hi, hi_); ++n) w[n] = coeff(n);
  return w;
}

LaurentPolynomial LaurentPolynomial::trimmed(double tol) const {
  int lo = hi_ + 1, hi = lo_ - 1;
  for (int n = lo_; n <= hi_; ++n) {
    if (std::abs(coeff(n)) > tol) {
      lo = std::min(lo, n);
      hi = std::max(hi, n);
    }
  }
  if (lo > hi) return constant(0.0);
  return window(lo, hi);
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& o) {
  if (o.lo_ < lo_ || o.hi_ > hi_) *this = window(std::min(lo_, o.lo_), std::max(hi_, o.hi_));
  for (int n = o.lo_; n <= o.hi_; ++n) (*this)[n] += o.coeff(n);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& o) {
  if (o.lo_ < lo_ || o.hi_ > hi_) *this = window(std::min(lo_, o.lo_), std::max(hi_, o.hi_));
  for (int n = o.lo_; n <= o.hi_; ++n) (*this)[n] -= o.coeff(n);
  return *this;
}

LaurentPolynomial& LaurentPolynomial::operator*=(cplx s) {
  for (auto& c : c_) c *= s;
  return *this;
}

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
  LaurentPolynomial p = LaurentPolynomial::zero(a.lo() + b.lo(), a.hi() + b.hi());
  for (int i = a.lo(); i <= a.hi(); ++i)
    for (int j = b.lo(); j <= b.hi(); ++j) p[i + j] += a.coeff(i) * b.coeff(j);
  return p;
}

}  // namespace annulus
