#pragma once

// Tail probabilities of the reference distributions used by the tests in
// stats.hpp. Thin wrappers over Boost.Math special functions.

namespace mvlabel::dist {

double normal_cdf(double z);
/// Upper tail P(Z > z).
double normal_sf(double z);
double normal_quantile(double p);

/// Two-sided P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// Upper tail of the F distribution with (d1, d2) degrees of freedom.
double f_sf(double f, double d1, double d2);

/// Upper tail of the chi-square distribution with `df` degrees of freedom.
double chi2_sf(double x, double df);

}  // namespace mvlabel::dist
