#pragma once

#include <complex>
#include <vector>

namespace annulus {

using cplx = std::complex<double>;

/// Finite Laurent sum  sum_{n=lo}^{hi} c_n z^n.
class LaurentPolynomial {
public:
  LaurentPolynomial() : lo_(0), hi_(0), c_(1, cplx{}) {}
  LaurentPolynomial(int lo, std::vector<cplx> coeffs);

  static LaurentPolynomial zero(int lo, int hi);
  static LaurentPolynomial monomial(int n, cplx c = 1.0);
  static LaurentPolynomial constant(cplx c) { return monomial(0, c); }

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return hi_; }
  /// Zero outside the window.
  cplx coeff(int n) const noexcept;
  cplx& operator[](int n) { return c_[static_cast<std::size_t>(n - lo_)]; }
  const std::vector<cplx>& coeffs() const noexcept { return c_; }

  cplx operator()(cplx z) const;
  LaurentPolynomial derivative() const;
  /// Restrict to [lo, hi] (padding with zeros where needed).
  LaurentPolynomial window(int lo, int hi) const;
  /// Smallest window containing all coefficients with |c| > tol.
  LaurentPolynomial trimmed(double tol = 0.0) const;

  LaurentPolynomial& operator+=(const LaurentPolynomial& o);
  LaurentPolynomial& operator-=(const LaurentPolynomial& o);
  LaurentPolynomial& operator*=(cplx s);

  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator*(LaurentPolynomial a, cplx s) { return a *= s; }
  friend LaurentPolynomial operator*(cplx s, LaurentPolynomial a) { return a *= s; }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);

private:
  int lo_;
  int hi_;
  std::vector<cplx> c_;
};

}  // namespace annulus
