#pragma once

// Scalar special functions and distribution quantiles. Every function here is
// pure and thread-safe; invalid arguments raise pbreg::DomainError.

namespace pbreg {

// A probability strictly inside (0, 1). Construction from a boundary or
// non-finite value throws DomainError.
class Probability {
 public:
  explicit Probability(double value);

  [[nodiscard]] double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }  // NOLINT(google-explicit-constructor)

 private:
  double value_;
};

/// ln Γ(x) for x > 0 (Lanczos series, reflection-free shift below 0.5).
double ln_gamma(double x);

/// ψ(x) = d/dx ln Γ(x) for x > 0.
double digamma(double x);

/// ln B(a, b).
double ln_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), x in [0, 1].
double beta_cdf(double x, double a, double b);

/// Inverse of beta_cdf in x. Newton iteration with a bisection bracket.
double beta_quantile(Probability p, double a, double b);

double normal_cdf(double x);

/// Standard normal inverse CDF, refined to full double precision.
double normal_quantile(Probability p);

/// Student-t inverse CDF for real df > 0.
double t_quantile(Probability p, double df);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi_square_sf(double x, double df);

/// Asymptotic Kolmogorov upper tail P(K > lambda).
double kolmogorov_sf(double lambda);

/// Two-sided p-value of a one-sample KS statistic `d` on `n` points.
double ks_pvalue(double d, int n);

}  // namespace pbreg
