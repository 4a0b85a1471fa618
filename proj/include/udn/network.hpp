// SPDX-License-Identifier: Apache-2.0
//
// Network description shared by the analytic coverage engines and the
// Monte Carlo simulator: tiers of transmitters, a path-loss variant, noise
// power and an association rule.

#pragma once

#include "udn/errors.hpp"
#include "udn/fading.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace udn {

/// Gamma-distributed serving-link power gain (shape, scale), replacing the
/// tier's fading on the desired link when set (multi-antenna post-processing
/// gain; maximum-ratio transmission with n antennas is GammaGain{n, 1}).
struct GammaGain {
    double shape = 1.0;
    double scale = 1.0;
};

struct Tier {
    double density = 1.0;   ///< transmitters per unit area
    double power = 1.0;     ///< transmit power (watts)
    double threshold = 1.0; ///< SINR threshold (linear)
    FadingModel fading;             ///< desired-link gain
    FadingModel interferer_fading;  ///< interfering-link gain
    int antennas = 1;
    std::optional<GammaGain> miso_gain;
};

/// L(r) = r^{-alpha}.
struct Unbounded {
    double alpha = 4.0;
};
/// L(r) = (1 + r)^{-alpha}.
struct Bounded {
    double alpha = 4.0;
};
/// Links span an antenna-height offset: L = (h^2 + r^2)^{-alpha/2}.
struct ThreeD {
    double alpha = 4.0;
    double height = 1.0;
};
/// Blockage-dependent exponent (LOS with probability e^{-tau r}), bounded
/// form (1+r)^{-alpha}; interferers are weighted by a cosine beam pattern
/// with spacing d and wavelength lambda_t.
struct MmWave {
    double alpha_los = 3.0;
    double alpha_nlos = 4.0;
    double blockage = 0.0;  ///< tau >= 0
    double spacing = 0.5;   ///< d > 0
    double wavelength = 1.0;
    double carrier = 1.0;   ///< carrier frequency (bookkeeping for sweeps)
};
using PathLoss = std::variant<Unbounded, Bounded, ThreeD, MmWave>;

struct ClosestBS {};
struct StrongestBS {};
/// Dedicated transmitter at a fixed distance (dipole model).
struct FixedDistance {
    double r = 1.0;
};
using Association = std::variant<ClosestBS, StrongestBS, FixedDistance>;

struct NetworkModel {
    std::vector<Tier> tiers;
    PathLoss path_loss = Unbounded{};
    double noise = 0.0; ///< sigma^2 (watts)
    Association association = ClosestBS{};
};

/// Throws BadParameter (with the offending field named) unless every tier
/// and variant parameter is admissible; exponents must satisfy alpha > 2 so
/// that delta = 2/alpha lies in (0, 1).
void validate(const NetworkModel& net);

/// The variant's path-loss exponent (LOS exponent for MmWave).
double path_loss_exponent(const PathLoss& path_loss);

} // namespace udn
