// SPDX-License-Identifier: Apache-2.0
//
// Analytic coverage-probability engines for Poisson multi-tier networks.
// Exact engines (closest / strongest / fixed-distance association) reduce the
// coverage probability to gamma-ratio transform evaluations; the remaining
// operations are closed-form approximations and scaling limits for
// multi-antenna, millimeter-wave and elevated deployments.

#pragma once

#include "udn/foxh.hpp"
#include "udn/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace udn {

struct CoverageEstimate {
    /// Coverage probability clamped to [0, 1].
    double value = 0.0;
    /// Estimated numerical error of `value` (quadrature residuals).
    double residual = 0.0;
    struct Diagnostics {
        double raw = 0.0;       ///< unclamped value
        long evaluations = 0;   ///< special-function evaluations consumed
        std::vector<std::string> flags; ///< e.g. "clamped", "noise-free"
    } diagnostics;
};

/// Coverage probability under nearest-transmitter association (per-tier
/// average-power bias) for Unbounded or Bounded path loss, exact up to
/// quadrature error.  Per-tier thresholds, powers and fading are honored;
/// noise enters through a radial displacement factor.  Serving distributions
/// with point-mass mixture components are rejected (NotApplicable).
CoverageEstimate coverage_closest(const NetworkModel& net, double tol = 1e-6);

/// Coverage probability under strongest-instantaneous-signal association
/// (Unbounded path loss, interference-limited).  Requires thresholds >= 1
/// in principle; smaller thresholds overestimate and are clamped.
CoverageEstimate coverage_strongest(const NetworkModel& net);

/// Coverage probability of a dedicated link at FixedDistance(r) inside a
/// Poisson field of interferers (Unbounded path loss, interference-limited).
/// tiers[0] supplies the serving power, threshold and serving distribution.
CoverageEstimate coverage_adhoc(const NetworkModel& net, double tol = 1e-9);

/// Density-independent dense-network coverage limit.  Unbounded path loss:
/// the interference-limited closest-association value, which requires equal
/// tier densities (they cancel); `lambda_common` must then be absent or
/// match.  Bounded path loss: the noise-free value at common density
/// `lambda_common` (required).
double dense_limit(const NetworkModel& net,
                   std::optional<double> lambda_common = std::nullopt,
                   double tol = 1e-6);

/// Large-density asymptote of coverage_adhoc as every tier density is set
/// to `lambda`, summed over serving-mixture components.  Applies to
/// exponential-type serving kernels (NotApplicable otherwise).
double adhoc_asymptote(const NetworkModel& net, double lambda);

/// Closed-form coverage approximation for a single-tier bounded network
/// with n_t-antenna maximum-ratio transmission:
/// Q(n_t, 2 pi lambda beta / ((alpha-1)(alpha-2))).
double miso_bounded_approx(double lambda, int n_t, double beta, double alpha);

/// Coverage approximation for the millimeter-wave model (net.path_loss must
/// be MmWave; the threshold is taken from tiers[0]).
double mmwave_approx(double lambda, int n_t, const NetworkModel& net);

/// Coverage approximation for the elevated (ThreeD) model.
double threed_approx(double lambda, int n_t, const NetworkModel& net);

enum class ScalingRegime { AdHoc, Cellular, MmWave };

/// Limit coverage when the antenna count is scaled jointly with density:
///  - AdHoc: n_t = gamma * lambda^{1/delta}; `ratio` is gamma.
///  - Cellular: n_t = zeta * lambda; `ratio` is zeta (step limit).
///  - MmWave: n_t = rho * lambda; `ratio` is rho (step limit).
/// `cfg` supplies exponents, thresholds and (AdHoc) the dipole geometry.
double scaling_limit(ScalingRegime regime, double ratio,
                     const NetworkModel& cfg);

enum class OptimalScalingKind { MmWave, ThreeD };

/// Critical scaling ratio separating the zero- and one-coverage regimes of
/// the corresponding step limit (rho* for MmWave, zeta* for ThreeD).
double optimal_scaling(OptimalScalingKind kind, const NetworkModel& cfg);

// --- Exposed building blocks (cross-checked independently in tests) ---

/// Kernel of P(g > x I) for unit one-sided stable I: chi(s) =
/// Gamma(s)/Gamma(1+delta*s); equals erfc(x/2) at delta = 1/2.
FoxHParams stable_ccdf_params(double delta);
double stable_ccdf(double x, double delta);

/// Radial displacement factor R(x) = (1/(delta x)) Int_0^inf e^{-y}
/// exp(-x^{-1/delta} y^{1/delta}) dy, i.e. the gamma-ratio transform with
/// chi(s) = Gamma(s) Gamma(delta(1-s)); tends to 1/(delta x) for large x.
double radial_noise_factor(double x, double delta);

/// Complementary-CDF kernel of a gain density kappa*H[c g]:
/// chi_U(w) = chi(w+1)/w, so that P(g > x) = (kappa/c) H_U[c x].
FoxHParams ccdf_transform(const FoxHParams& kernel);

/// Kernel of P(g > beta r^alpha I) against a stable interference field:
/// chi_Y(s) = Gamma(s) chi(1 + delta s) / Gamma(1 + delta s).
FoxHParams adhoc_transform(const FoxHParams& kernel, double delta);

/// Interference exclusion kernels Psi_1 (area-weighted) and Psi_2
/// (boundary-weighted) of an interferer gain distribution:
///   Psi_1(xi) = E[phi_delta(xi g)] / (delta xi),
///   Psi_2(xi) = 2 E[phi_{delta/2}(xi g)] / (delta xi),
/// phi_c(v) = v^c gamma(1-c, v) - 1 + e^{-v}.  `order` selects 1 or 2.
double interference_psi(const FadingModel& model, double delta, int order,
                        double xi);

/// Generalized exponential integral E_nu(tau) = Int_1^inf e^{-tau t} t^{-nu} dt.
double exponential_integral(double nu, double tau);

/// Combined LOS/NLOS propagation constant of the millimeter-wave model
/// (the quantity multiplying pi lambda beta e^tau lambda_t / d).
double mmwave_propagation_constant(double alpha_los, double alpha_nlos,
                                   double tau);

} // namespace udn
