// SPDX-License-Identifier: Apache-2.0
//
// Complex log-gamma and small helpers built on top of it.
//
// The evaluator integrates products of gamma functions along vertical lines
// in the complex plane, so everything here is phrased in terms of log Gamma:
// magnitudes span thousands of orders and only ever get exponentiated after
// the additive combination has been formed.

#pragma once

#include <complex>

namespace udn {

/// log Gamma(z) for complex z, Lanczos approximation (g = 7, 9 coefficients)
/// in the right half plane and the reflection formula for Re z < 0.5.
/// Relative accuracy is ~1e-14 away from the poles; the branch of the result
/// is unspecified (consumers only ever form exp of sums of these).
std::complex<double> log_gamma(std::complex<double> z);

/// log |Gamma(x)| together with the sign of Gamma(x) for real x.
/// Returns {log|Gamma|, sign}; sign is 0 at the poles (x a non-positive
/// integer) where the log is +inf.
struct SignedLogGamma {
    double log_abs;
    int sign;
};
SignedLogGamma log_gamma_signed(double x);

/// log(sin(pi z)) computed without overflow for large |Im z|.
std::complex<double> log_sin_pi(std::complex<double> z);

} // namespace udn
