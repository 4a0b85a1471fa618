// SPDX-License-Identifier: Apache-2.0
//
// Thin quadrature layer: adaptive rules come from boost.math, Gauss rules
// with non-Legendre weights are generated once via the Golub-Welsch
// eigenvalue method (Eigen), and everything funnels errors into the udn
// taxonomy so callers can report a QuadratureFailure uniformly.

#pragma once

#include <functional>
#include <vector>

namespace udn {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive Gauss-Kronrod on a finite interval.  Throws QuadratureFailure if
/// the error estimate cannot be pushed below tol * max(1, |I|).
QuadratureResult integrate(const std::function<double(double)>& f,
                           double a, double b, double tol);

/// Adaptive integration on [a, inf).
QuadratureResult integrate_to_inf(const std::function<double(double)>& f,
                                  double a, double tol);

/// Nodes/weights of an n-point Gauss rule, weight e^{-x} on [0, inf).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussRule& gauss_laguerre(int n);

/// Nodes/weights of an n-point Gauss rule, weight e^{-x^2} on (-inf, inf).
const GaussRule& gauss_hermite(int n);

/// Fixed 16-point Gauss-Legendre on [a, b] applied to a complex- or
/// real-valued integrand; exposed as raw nodes so hot loops can inline.
const GaussRule& gauss_legendre_16();

} // namespace udn
