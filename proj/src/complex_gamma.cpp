// SPDX-License-Identifier: Apache-2.0

#include "udn/complex_gamma.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace udn {

namespace {

// Lanczos coefficients for g = 7, truncated at 9 terms.  This classic set
// delivers close to double precision over the whole right half plane, which
// is all the contour code ever asks for after reflection.
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kLogSqrtTwoPi = 0.91893853320467274178; // log(sqrt(2 pi))

std::complex<double> lanczos_right_half(std::complex<double> z)
{
    // Valid for Re z >= 0.5; expects the caller to have reflected otherwise.
    std::complex<double> x = kLanczos[0];
    for (int i = 1; i < 9; ++i)
        x += kLanczos[i] / (z + double(i - 1));
    const std::complex<double> t = z + 6.5; // z + g - 0.5
    return kLogSqrtTwoPi + (z - 0.5) * std::log(t) - t + std::log(x);
}

} // namespace

std::complex<double> log_sin_pi(std::complex<double> z)
{
    using namespace std::complex_literals;
    const std::complex<double> w = std::numbers::pi * z;
    const double log_half = -0.69314718055994530942;
    // sin w = (e^{iw} - e^{-iw}) / 2i; factor out the growing exponential so
    // the log never sees an overflowed intermediate.
    if (w.imag() > 0.0) {
        // sin w = (-e^{-iw}/2i)(1 - e^{2iw}), |e^{2iw}| = e^{-2 Im w} < 1
        return -1i * w + std::log(1.0 - std::exp(2i * w))
             + std::complex<double>(log_half, std::numbers::pi / 2.0);
    }
    // sin w = (e^{iw}/2i)(1 - e^{-2iw}), |e^{-2iw}| = e^{2 Im w} <= 1
    return 1i * w + std::log(1.0 - std::exp(-2i * w))
         + std::complex<double>(log_half, -std::numbers::pi / 2.0);
}

std::complex<double> log_gamma(std::complex<double> z)
{
    if (z.real() >= 0.5)
        return lanczos_right_half(z);
    // Reflection: log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z).
    return std::log(std::numbers::pi) - log_sin_pi(z) - lanczos_right_half(1.0 - z);
}

SignedLogGamma log_gamma_signed(double x)
{
    if (x > 0.0)
        return {std::lgamma(x), 1};
    if (x == std::floor(x))
        return {std::numeric_limits<double>::infinity(), 0};
    // Gamma alternates sign between consecutive negative integers:
    // positive on (-2,-1)+(-4,-3)+..., negative on (-1,0)+(-3,-2)+...
    const double n = std::floor(x);
    const int sign = (static_cast<long long>(n) % 2 == 0) ? 1 : -1;
    return {std::lgamma(x), sign};
}

} // namespace udn
