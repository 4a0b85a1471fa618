// SPDX-License-Identifier: Apache-2.0

#include "udn/network.hpp"

#include <cmath>
#include <string>

namespace udn {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok)
        throw BadParameter(what);
}

void check_exponent(double alpha, const char* name)
{
    require(std::isfinite(alpha) && alpha > 2.0,
            std::string(name) + " must exceed 2 (got " + std::to_string(alpha) + ")");
}

} // namespace

double path_loss_exponent(const PathLoss& path_loss)
{
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MmWave>)
                return p.alpha_los;
            else
                return p.alpha;
        },
        path_loss);
}

void validate(const NetworkModel& net)
{
    require(!net.tiers.empty(), "network must contain at least one tier");
    require(std::isfinite(net.noise) && net.noise >= 0.0,
            "noise power must be finite and non-negative");

    for (std::size_t k = 0; k < net.tiers.size(); ++k) {
        const Tier& t = net.tiers[k];
        const std::string at = "tier " + std::to_string(k) + ": ";
        require(std::isfinite(t.density) && t.density > 0.0, at + "density must be positive");
        require(std::isfinite(t.power) && t.power > 0.0, at + "power must be positive");
        require(std::isfinite(t.threshold) && t.threshold > 0.0,
                at + "threshold must be positive");
        require(t.antennas >= 1, at + "antenna count must be at least 1");
        if (t.miso_gain) {
            require(std::isfinite(t.miso_gain->shape) && t.miso_gain->shape > 0.0,
                    at + "gain shape must be positive");
            require(std::isfinite(t.miso_gain->scale) && t.miso_gain->scale > 0.0,
                    at + "gain scale must be positive");
        }
    }

    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Unbounded>) {
                check_exponent(p.alpha, "path-loss exponent");
            } else if constexpr (std::is_same_v<T, Bounded>) {
                check_exponent(p.alpha, "path-loss exponent");
            } else if constexpr (std::is_same_v<T, ThreeD>) {
                check_exponent(p.alpha, "path-loss exponent");
                require(std::isfinite(p.height) && p.height >= 0.0,
                        "antenna height must be non-negative");
            } else {
                if (p.alpha_los == 2.0 || p.alpha_nlos == 2.0)
                    throw ParameterSingularity(
                        "millimeter-wave exponents of exactly 2 make the "
                        "interference functional singular");
                check_exponent(p.alpha_los, "LOS exponent");
                check_exponent(p.alpha_nlos, "NLOS exponent");
                require(std::isfinite(p.blockage) && p.blockage >= 0.0,
                        "blockage rate must be non-negative");
                require(std::isfinite(p.spacing) && p.spacing > 0.0,
                        "antenna spacing must be positive");
                require(std::isfinite(p.wavelength) && p.wavelength > 0.0,
                        "wavelength must be positive");
                require(std::isfinite(p.carrier) && p.carrier > 0.0,
                        "carrier frequency must be positive");
            }
        },
        net.path_loss);

    if (const auto* fixed = std::get_if<FixedDistance>(&net.association))
        require(std::isfinite(fixed->r) && fixed->r > 0.0,
                "fixed link distance must be positive");
}

} // namespace udn
