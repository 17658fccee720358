#pragma once

namespace tabori {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a) for
// a > 0, x >= 0. Series expansion below x = a + 1, Lentz continued fraction
// above; relative error is at or below 1e-10 across the supported range.
double regularized_gamma_q(double a, double x);

// Upper-tail probability of the chi-square distribution,
// P(X >= statistic) = Q(df / 2, statistic / 2). statistic <= 0 gives 1.
double chi_square_upper_tail(double statistic, int degrees_of_freedom = 1);

}  // namespace tabori
