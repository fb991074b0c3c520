#pragma once

#include <functional>
#include <vector>

#include "delgame/params.hpp"

namespace delgame {

/// Erlang(n) CDF at x, i.e. the regularized lower gamma function at integer
/// shape: 1 - e^{-x} sum_{i<n} x^i/i!. Negative x is allowed; the value is
/// then outside [0,1], which the signed partial-fraction algebra relies on.
double erlang_tail(int n, double x);

/// Inverse Laplace transform of 1/((g+theta)(l+theta)^m) at t:
/// e^{-g t} / (l-g)^m * erlang_tail(m, (l-g)t). Requires |l-g| > 1e-9.
double invert_gamma_erlang(double gamma_pole, double pole1, int m, double t);

/// coeff / ((gamma_pole+theta)(pole1+theta)^mult1 (pole2+theta)^mult2).
struct RationalLstTerm {
  double coeff = 1.0;
  double gamma_pole = 1.0;
  double pole1 = 0.0;
  int mult1 = 0;
  double pole2 = 0.0;
  int mult2 = 0;
};

/// Inverse Laplace transform of a three-pole rational term by residue
/// expansion (partial fractions with multiplicities). Poles must be pairwise
/// separated by more than 1e-9 (PolesTooClose otherwise); mult1+mult2 <= 400.
double invert_rational_term(const RationalLstTerm& term, double t);

/// Euler-summation (shifted Bromwich trapezoid + binomial acceleration)
/// numeric inverse Laplace transform, used as an oracle for the exact paths.
/// Aimed at ~1e-8 absolute accuracy for smooth bounded densities.
struct EulerOptions {
  double shift = 20.7;        // aliasing error ~ e^{-shift}
  int pre_terms = 47;         // plain partial sums before acceleration
  int accel_terms = 31;       // binomially averaged tail terms
  double divergence_tol = 1e-4;
};
double laplace_invert_numeric(const std::function<Complex(Complex)>& transform,
                              double t, const EulerOptions& opt = {});

/// Exact density of the observed ruin time, assembled from the closed-form
/// marginal LST as a sum of rational terms and inverted pole by pole.
/// Construction requires a closed-form-capable law and pole separation
/// (gamma rate away from lambda and lambda+mu).
class TauDensity {
 public:
  explicit TauDensity(const GameParams& p);

  double pdf(double t) const;
  double cdf(double t) const;
  double mean() const;  // closed-form first moment

 private:
  struct PolePart {
    double pole;
    std::vector<double> coef;   // coef[r] multiplies t^r e^{-pole t}
    std::vector<double> cdf_w;  // cdf_w[r] = coef[r] r! / pole^{r+1}
  };
  struct TermExpansion {  // ascending small-t route, one per transform term
    double coeff;
    int total_degree;
    std::vector<double> e;
  };
  double eval(double t, bool integrated) const;
  std::vector<PolePart> parts_;
  std::vector<TermExpansion> terms_;
  double cdf_const_gap_ = 0.0;  // computed sum of cdf weights minus exact 1
};

/// Convenience single-point evaluation (rebuilds the term table each call).
double tau_pdf(const GameParams& p, double t);

struct DistributionTable;

/// Sampled ruin-time density on the uniform grid t0 + i*dt, i < n, with the
/// same negative-value clipping policy as the pmf extraction.
DistributionTable tau_pdf_table(const GameParams& p, double t0, double dt,
                                long n);

/// A pmf (index -> mass) or sampled pdf (grid -> density) with provenance.
struct DistributionTable {
  enum class Kind { Pmf, Pdf };
  Kind kind = Kind::Pmf;
  bool empirical = false;
  std::vector<double> support;
  std::vector<double> values;
  std::vector<double> stderrs;  // empty for analytic tables
  double clipped_mass = 0.0;    // total negative mass clipped to zero
  double max_imag_residue = 0.0;

  double total_mass() const;
};

/// Coefficient extraction from a probability generating function by discrete
/// Fourier sums on the circle of the given radius (default: unit circle).
/// grid_points == 0 picks max(4*(max_k+1), 64); an explicit grid below
/// 4*max_k throws GridTooCoarse. Imaginary residues below 1e-10 are
/// discarded; small negative masses are clipped to zero and accounted in
/// clipped_mass.
DistributionTable pgf_to_pmf(const std::function<Complex(Complex)>& pgf,
                             long max_k, long grid_points = 0,
                             double radius = 1.0);

}  // namespace delgame
