#pragma once

namespace stationplot {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation,
// accurate to ~1e-14. Throws NumericError on non-convergence.
double ibeta(double a, double b, double x);

// Regularized lower incomplete gamma P(a, x) and its complement Q(a, x).
double igamma_lower(double a, double x);
double igamma_upper(double a, double x);

// CDFs of the F(d1, d2) and chi-squared(k) distributions, with upper tails
// (survival functions) computed directly so values near 0 keep full relative
// precision.
double f_cdf(double x, double d1, double d2);
double f_sf(double x, double d1, double d2);
double chi2_cdf(double x, double k);
double chi2_sf(double x, double k);

}  // namespace stationplot
