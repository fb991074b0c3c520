#include "delgame/series.hpp"

#include <cmath>
#include <numbers>

namespace delgame {

namespace {

Complex int_pow(Complex z, long n) {
  Complex acc = 1.0;
  while (n > 0) {
    if (n & 1) acc *= z;
    z *= z;
    n >>= 1;
  }
  return acc;
}

// Partial geometric sum sum_{l<=m} b^l expanded around b = 1:
// (m+1) + C(m+1,2)(b-1) + C(m+1,3)(b-1)^2. For |b-1| <= 1e-9 and m up to a
// few hundred the dropped term is below 1e-16 of the leading one.
Complex geometric_partial_near_one(long m, Complex db) {
  const double m1 = static_cast<double>(m + 1);
  const double c2 = m1 * m / 2.0;
  const double c3 = c2 * (m - 1) / 3.0;
  return m1 + db * (c2 + db * c3);
}

}  // namespace

BivariateSeries::BivariateSeries(int max_deg_x, int max_deg_y)
    : kx_(max_deg_x), ky_(max_deg_y) {
  if (kx_ < 0 || ky_ < 0)
    fail(ErrorCode::InvalidArgument, "truncation orders must be >= 0");
  c_.assign(static_cast<size_t>(kx_ + 1) * (ky_ + 1), Complex(0.0));
}

BivariateSeries BivariateSeries::constant(Complex c, int max_deg_x, int max_deg_y) {
  BivariateSeries s(max_deg_x, max_deg_y);
  s.at(0, 0) = c;
  return s;
}

BivariateSeries& BivariateSeries::operator+=(const BivariateSeries& o) {
  if (o.kx_ != kx_ || o.ky_ != ky_)
    fail(ErrorCode::InvalidArgument, "series truncation orders differ");
  for (size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
  return *this;
}

BivariateSeries& BivariateSeries::operator-=(const BivariateSeries& o) {
  if (o.kx_ != kx_ || o.ky_ != ky_)
    fail(ErrorCode::InvalidArgument, "series truncation orders differ");
  for (size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
  return *this;
}

BivariateSeries& BivariateSeries::operator*=(Complex s) {
  for (auto& c : c_) c *= s;
  return *this;
}

BivariateSeries BivariateSeries::operator*(const BivariateSeries& o) const {
  if (o.kx_ != kx_ || o.ky_ != ky_)
    fail(ErrorCode::InvalidArgument, "series truncation orders differ");
  BivariateSeries r(kx_, ky_);
  for (int i = 0; i <= kx_; ++i)
    for (int j = 0; j <= ky_; ++j) {
      Complex acc = 0.0;
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) acc += at(p, q) * o.at(i - p, j - q);
      r.at(i, j) = acc;
    }
  return r;
}

BivariateSeries BivariateSeries::reciprocal() const {
  const Complex c00 = at(0, 0);
  if (std::abs(c00) <= 1e-14)
    fail(ErrorCode::SingularConstantTerm,
         "series has (numerically) vanishing constant term");
  BivariateSeries r(kx_, ky_);
  const Complex inv = 1.0 / c00;
  r.at(0, 0) = inv;
  for (int i = 0; i <= kx_; ++i)
    for (int j = 0; j <= ky_; ++j) {
      if (i == 0 && j == 0) continue;
      Complex acc = 0.0;  // sum over (p,q) != (0,0) of c_{p,q} r_{i-p,j-q}
      for (int p = 0; p <= i; ++p)
        for (int q = 0; q <= j; ++q) {
          if (p == 0 && q == 0) continue;
          acc += at(p, q) * r.at(i - p, j - q);
        }
      r.at(i, j) = -inv * acc;
    }
  return r;
}

BivariateSeries BivariateSeries::pow_trunc(int n) const {
  if (n < 0) fail(ErrorCode::InvalidArgument, "pow_trunc needs n >= 0");
  BivariateSeries acc = constant(1.0, kx_, ky_);
  BivariateSeries base = *this;
  while (n > 0) {
    if (n & 1) acc = acc * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return acc;
}

Complex d_op_from_series(const BivariateSeries& s, long k, long m) {
  if (k < 0 || m < 0) return 0.0;
  if (k > s.max_deg_x() || m > s.max_deg_y())
    fail(ErrorCode::TruncationTooSmall,
         "operator order exceeds the series truncation");
  Complex acc = 0.0;
  for (long i = 0; i <= k; ++i)
    for (long j = 0; j <= m; ++j) acc += s.at(static_cast<int>(i), static_cast<int>(j));
  return acc;
}

Complex d_op_geometric(long k, Complex b) {
  if (k < 0) return 0.0;
  if (std::abs(1.0 - b) > 1e-9)
    return (1.0 - int_pow(b, k + 1)) / (1.0 - b);
  return geometric_partial_near_one(k, b - 1.0);
}

Complex d_op_power(long k, Complex a, int n) {
  if (k < 0) return 0.0;
  if (n < 1) fail(ErrorCode::InvalidArgument, "d_op_power needs n >= 1");
  Complex binom = 1.0;  // C(n+j-1, j)
  Complex apow = 1.0;
  Complex acc = 0.0;
  for (long j = 0; j <= k; ++j) {
    if (j > 0) {
      binom *= static_cast<double>(n + j - 1) / static_cast<double>(j);
      apow *= a;
    }
    acc += binom * apow;
  }
  return acc;
}

namespace {

// b = 1 within the switch window: sum the inner geometric partial sums
// through their expansion around 1 instead of the cancelling quotient.
Complex d_op_product_near_one(long k, Complex a, Complex db, int n) {
  Complex binom = 1.0, apow = 1.0, acc = 0.0;
  for (long j = 0; j <= k; ++j) {
    if (j > 0) {
      binom *= static_cast<double>(n + j - 1) / static_cast<double>(j);
      apow *= a;
    }
    acc += binom * apow * geometric_partial_near_one(k - j, db);
  }
  return acc;
}

}  // namespace

Complex d_op_product(long k, Complex a, Complex b, int n) {
  if (k < 0) return 0.0;
  if (n < 1) fail(ErrorCode::InvalidArgument, "d_op_product needs n >= 1");
  if (std::abs(b) <= 1e-14) return d_op_power(k, a, n);
  if (std::abs(1.0 - b) <= 1e-9) return d_op_product_near_one(k, a, b - 1.0, n);
  // Same expression as the ratio form below with b^{k+1}(a/b)^j regrouped as
  // a^j b^{k+1-j}, which stays bounded for independent a, b of tiny modulus.
  Complex binom = 1.0, apow = 1.0, acc = 0.0;
  for (long j = 0; j <= k; ++j) {
    if (j > 0) {
      binom *= static_cast<double>(n + j - 1) / static_cast<double>(j);
      apow *= a;
    }
    acc += binom * apow * (1.0 - int_pow(b, k + 1 - j));
  }
  return acc / (1.0 - b);
}

Complex d_op_product(long k, Complex a, Complex b, Complex a_over_b, int n) {
  if (k < 0) return 0.0;
  if (n < 1) fail(ErrorCode::InvalidArgument, "d_op_product needs n >= 1");
  if (std::abs(b) <= 1e-14) return d_op_power(k, a, n);
  if (std::abs(1.0 - b) <= 1e-9) return d_op_product_near_one(k, a, b - 1.0, n);
  const Complex bk1 = int_pow(b, k + 1);
  Complex binom = 1.0, apow = 1.0, rpow = 1.0, acc = 0.0;
  for (long j = 0; j <= k; ++j) {
    if (j > 0) {
      binom *= static_cast<double>(n + j - 1) / static_cast<double>(j);
      apow *= a;
      rpow *= a_over_b;
    }
    acc += binom * (apow - bk1 * rpow);
  }
  return acc / (1.0 - b);
}

Complex d_op_via_cauchy(const std::function<Complex(Complex, Complex)>& f,
                        long k, long m, double radius, int grid) {
  if (k < 0 || m < 0) return 0.0;
  if (!(radius > 0.0 && radius < 1.0))
    fail(ErrorCode::InvalidArgument, "radius must lie in (0, 1)");
  const long need = 4 * std::max(k, m);
  if (grid < 4 || grid < need)
    fail(ErrorCode::GridTooCoarse, "grid must be >= max(4, 4*max(k, m))");

  // sum_{i<=k,j<=m} c_ij with c_ij from the discrete Fourier sums factorizes
  // into per-node geometric weights:
  //   (1/n^2) sum_{p,q} f(r w^p, r w^q) W_p V_q,
  //   W_p = sum_{i<=k} (w^{-p}/r)^i, similarly V_q.
  const int n = grid;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Complex> node(n), wk(n), vm(n);
  for (int p = 0; p < n; ++p) {
    const Complex w = std::polar(1.0, two_pi * p / n);
    node[p] = radius * w;
    const Complex z = std::conj(w) / radius;
    // |z| > 1, so the geometric partial sum is always regular
    wk[p] = (int_pow(z, k + 1) - 1.0) / (z - 1.0);
    vm[p] = (int_pow(z, m + 1) - 1.0) / (z - 1.0);
  }
  Complex acc = 0.0;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) acc += f(node[p], node[q]) * wk[p] * vm[q];
  return acc / (static_cast<double>(n) * n);
}

}  // namespace delgame
