#pragma once

#include <span>
#include <vector>

// Log-domain special functions used by the inverse Gaussian cumulant, the
// normalized inverse Gaussian density and the Gini-index moments.
namespace mfmig::special_math {

// log K_{n-1/2}(z) for integer order index n >= 0 and z > 0, via the
// closed-form finite sum for half-integer orders.  K_{-1/2} = K_{1/2}.
double log_bessel_k_half(int order_index, double z);

// log K_n(z) for integer n >= 0, z > 0.  Upward recurrence on exponentially
// scaled K_0, K_1.  Only needed by the even-dimension NIGau density.
double log_bessel_k_int(int order, double z);

// Upper incomplete gamma Gamma(-2, x), x > 0.  Two recurrence steps down
// from Gamma(0, x) = E1(x).
double upper_incomplete_gamma_neg2(double x);

// Exponential integral E1(x) = Gamma(0, x), x > 0.
double expint_e1(double x);

double log_sum_exp(std::span<const double> values);
double log_sum_exp(double a, double b);

}  // namespace mfmig::special_math
