// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo reference for the analytic coverage engines: Poisson network
// realizations on a disk, exact SINR evaluation under every association rule
// and path-loss variant, and a seeded, reproducible coverage estimator.

#pragma once

#include "udn/errors.hpp"
#include "udn/network.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace udn {

/// One sampled network seen from a typical user at the origin.
///
/// Each transmitter carries two channel draws: `gain` is the interfering-link
/// power gain and `serve_gain` the desired-link gain used when this point is
/// the serving transmitter.  When a tier's desired and interfering channels
/// follow the same model (and no antenna gain applies) a single draw is
/// shared, so ranking and interference see the same fade.  Under MmWave path
/// loss every point also records its blockage state and the transmit beam's
/// boresight offset theta ~ U[-1, 1] toward its own intended user.
struct Realization {
    struct Point {
        double x = 0.0;
        double y = 0.0;
        int tier = 0;
        double gain = 1.0;
        double serve_gain = 1.0;
        bool los = true;
        double beam = 0.0;
    };

    std::vector<Point> points;
    double region_radius = 0.0;
    /// Desired-link draw for the dedicated transmitter (FixedDistance only).
    double serving_gain = 1.0;
    /// Expected interference from beyond the sampled disk, added to every
    /// SINR denominator so truncation bias stays far below the Monte Carlo
    /// confidence interval.
    double tail_mean = 0.0;
};

/// Coverage estimate with a 95% normal-approximation confidence half-width.
struct McEstimate {
    double value = 0.0;
    double half_width = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

/// One power-gain draw from a fading model.  Catalog mixtures of point
/// masses and gamma kernels are sampled componentwise (so the draw follows
/// the same truncated mixture the analytic engines integrate); GenGamma and
/// FisherF use exact transformations of gamma variates; other custom
/// kernels fall back to a cached 4096-node log-spaced inverse-CDF table
/// with monotone interpolation.
double sample_gain(const FadingModel& model, std::mt19937_64& rng);

/// Samples one realization: per-tier Poisson counts on a disk whose radius
/// is the larger of a 500-expected-point floor and the radius that keeps
/// the expected truncated interference fraction below 1e-3 (capped so a
/// realization stays tractable; the remainder is the analytic `tail_mean`
/// correction).  `region_scale` inflates the chosen radius, which is the
/// hook the edge-effect tests use.  Zero-density networks yield an empty
/// realization, not an error.
Realization sample_network(const NetworkModel& net, std::uint64_t seed,
                           double region_scale = 1.0);

/// SINR of the typical user at the origin under `net.association`:
///  - ClosestBS: serving transmitter maximizes average received power among
///    per-tier nearest points; everything else interferes.
///  - StrongestBS: serving transmitter maximizes instantaneous SINR (scaled
///    by its tier threshold, so multi-tier coverage is max SINR_x/beta_x).
///  - FixedDistance: a dedicated transmitter at distance r (not part of the
///    Poisson field) is served; every sampled point interferes.
/// MmWave interferers are weighted by the cos^2 array pattern at their
/// recorded beam offset and use their recorded blockage exponent.  Throws
/// EmptyRealization when no serving transmitter exists.
/// `serving_tier`, when given, receives the serving tier index.
double compute_sinr(const Realization& real, const NetworkModel& net,
                    int* serving_tier = nullptr);

/// Fraction of trials whose SINR exceeds the serving tier's threshold.
/// Trials are split across 256 counter-derived substreams of the master
/// seed, so the estimate is bit-identical for a given (net, trials, seed)
/// regardless of how the substreams are scheduled.  Requires trials >= 1000.
McEstimate estimate_coverage(const NetworkModel& net, long trials,
                             std::uint64_t seed, double region_scale = 1.0);

} // namespace udn
