#pragma once

#include <functional>
#include <vector>

#include "delgame/error.hpp"

namespace delgame {

/// Truncated power series in two formal variables with complex coefficients.
/// All arithmetic is exact on the retained grid: the (i,j) coefficient of a
/// result equals the mathematically exact coefficient whenever i,j are within
/// the truncation orders.
class BivariateSeries {
 public:
  BivariateSeries(int max_deg_x, int max_deg_y);

  static BivariateSeries constant(Complex c, int max_deg_x, int max_deg_y);

  int max_deg_x() const { return kx_; }
  int max_deg_y() const { return ky_; }

  Complex& at(int i, int j) { return c_[idx(i, j)]; }
  Complex at(int i, int j) const { return c_[idx(i, j)]; }

  BivariateSeries& operator+=(const BivariateSeries& o);
  BivariateSeries& operator-=(const BivariateSeries& o);
  BivariateSeries& operator*=(Complex s);
  friend BivariateSeries operator+(BivariateSeries a, const BivariateSeries& b) { return a += b; }
  friend BivariateSeries operator-(BivariateSeries a, const BivariateSeries& b) { return a -= b; }
  friend BivariateSeries operator*(BivariateSeries a, Complex s) { return a *= s; }
  friend BivariateSeries operator*(Complex s, BivariateSeries a) { return a *= s; }

  /// Truncated Cauchy product.
  BivariateSeries operator*(const BivariateSeries& o) const;

  /// Multiplicative inverse on the truncated grid; requires a constant term
  /// of magnitude above 1e-14 (throws SingularConstantTerm otherwise).
  BivariateSeries reciprocal() const;

  /// Truncated integer power (binary exponentiation), n >= 0.
  BivariateSeries pow_trunc(int n) const;

 private:
  size_t idx(int i, int j) const { return static_cast<size_t>(i) * (ky_ + 1) + j; }
  int kx_, ky_;
  std::vector<Complex> c_;
};

/// Partial coefficient sum sum_{i<=k, j<=m} c_ij, which is the (k,m) Taylor
/// coefficient of s(x,y) / ((1-x)(1-y)). Negative k or m yields 0; k or m
/// beyond the truncation orders throws TruncationTooSmall.
Complex d_op_from_series(const BivariateSeries& s, long k, long m);

/// Closed form for the univariate operator applied to 1/(1-bx):
/// (1 - b^{k+1}) / (1 - b), with a series-expansion branch inside the
/// |1-b| <= 1e-9 window where the quotient cancels catastrophically.
Complex d_op_geometric(long k, Complex b);

/// Closed form for 1/(1-ax)^n, n >= 1: sum_{j<=k} C(n+j-1,j) a^j.
Complex d_op_power(long k, Complex a, int n);

/// Closed form for 1/((1-bx)(1-ax)^n), n >= 1. The two-argument overload
/// derives a/b internally; the explicit-ratio overload lets callers supply a
/// cancellation-free value for a/b.
Complex d_op_product(long k, Complex a, Complex b, int n);
Complex d_op_product(long k, Complex a, Complex b, Complex a_over_b, int n);

/// Numeric realization of the operator for a pointwise-evaluable function:
/// Taylor coefficients are recovered by discrete Fourier sums over the torus
/// of the given radius (< 1) and partial-summed. Requires f analytic on the
/// closed bidisc of that radius and grid >= 4*max(k,m) (and >= 4); the
/// aliasing error scales like radius^(grid - max(k,m)).
Complex d_op_via_cauchy(const std::function<Complex(Complex, Complex)>& f,
                        long k, long m, double radius, int grid);

}  // namespace delgame
