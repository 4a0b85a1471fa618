// SPDX-License-Identifier: Apache-2.0
//
// Configuration-driven sweep front end: a plain-text grammar describing a
// network plus a parameter grid, per-row engine dispatch with error capture,
// stable CSV output, the bundled figure recipes, and the special-function
// identity selftest behind the command-line tool.

#pragma once

#include "udn/network.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace udn {

/// Quantity substituted into the base network at each grid point.
enum class SweepVariable {
    Lambda,     ///< "lambda": transmitter density of every tier
    Beta,       ///< "beta": SINR threshold of every tier (linear)
    Antennas,   ///< "n_t": antenna count (and serving-gain shape when set)
    Height,     ///< "h": elevation of the ThreeD path-loss variant
    RiceFactor, ///< "k_factor": first tier's Rice factor (both link sides)
    Blockage,   ///< "tau": blockage rate of the MmWave path-loss variant
};

/// Computation dispatched per grid point.
enum class SweepEngine {
    Closest,     ///< nearest-transmitter analytic engine
    Strongest,   ///< strongest-transmitter analytic engine
    AdHoc,       ///< fixed-distance (dipole) analytic engine
    MisoBounded, ///< closed-form multi-antenna bounded-path-loss approximation
    MmWave,      ///< millimeter-wave beamforming approximation
    ThreeD,      ///< elevated-deployment approximation
    Simulate,    ///< Monte Carlo estimate
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::Lambda;
    std::vector<double> grid;         ///< non-empty, strictly increasing
    std::vector<SweepEngine> engines; ///< non-empty, no duplicates
    NetworkModel base;
    std::uint64_t seed = 0xC0FFEE;
    long trials = 200000; ///< Monte Carlo trials per simulate row
    double tol = 1e-6;    ///< analytic-engine tolerance
};

/// Config/CSV spelling of the enumerators ("lambda", ..., "simulate").
const char* variable_name(SweepVariable variable);
const char* engine_name(SweepEngine engine);

/// Whether `engine` applies to this network's path-loss variant and
/// association rule (the per-engine preconditions, checked up front so a
/// config mistake fails before any rows run).
bool engine_supports(SweepEngine engine, const NetworkModel& net);

/// Parses the sweep grammar (see README): `key = value` lines, `#` comments,
/// a `[network]` section and one `[tier]` section per tier.  `overrides` are
/// `key=value` strings applied after the file, with `network.` / `tierN.`
/// prefixes addressing the sections.  The `grid` and `engines` keys may be
/// omitted here (single-point front ends fill them in); run_sweep requires
/// both.  Throws ConfigError carrying "<origin>:<line>:" diagnostics.
SweepSpec parse_sweep(std::string_view text, std::string_view origin = "<config>",
                      const std::vector<std::string>& overrides = {});

/// parse_sweep over the contents of the file at `path`.
SweepSpec parse_sweep_file(const std::string& path,
                           const std::vector<std::string>& overrides = {});

/// Structural checks ahead of a run: non-empty strictly increasing grid in
/// the variable's domain, non-empty duplicate-free engine list compatible
/// with the network variant, trial/tolerance bounds, and a valid base
/// network.  Throws ConfigError.
void validate_sweep(const SweepSpec& spec);

/// The base network with the swept quantity set to `value`.  Density and
/// threshold sweeps touch every tier; antenna sweeps round to the nearest
/// count and propagate the exact value to a configured serving-gain shape;
/// Rice-factor sweeps replace the first tier's fading on both link sides.
NetworkModel apply_variable(const NetworkModel& base, SweepVariable variable,
                            double value);

/// Current value of the swept quantity in `net` (single-point runs read the
/// grid point off the base network).  Throws NotApplicable when the network
/// does not carry the quantity.
double variable_value(const NetworkModel& net, SweepVariable variable);

/// Runs the sweep, streaming the header and one CSV row per (grid point,
/// engine) to `out` in grid order.  Columns:
/// `variable,value,engine,coverage,residual_or_ci,trials,seconds,error`.
/// Engine failures land in the row's `error` column and the run continues.
/// Grid point i simulates with seed `spec.seed + i`, so output is a pure
/// function of the spec.  Returns the number of error rows.
int run_sweep(const SweepSpec& spec, std::ostream& out);

/// Writes fig<n>.csv (n in 1..7) into `out_dir`: the sweep data behind the
/// bundled example figures, pairing each curve's analytic value with a
/// Monte Carlo estimate on every row.  Columns:
/// `curve,variable,value,engine,analytic,residual,simulated,ci_half_width,trials,seconds,error`.
/// `trials` bounds the simulation cost per row.  Returns the number of
/// error rows.
int reproduce_figure(int n, const std::string& out_dir, long trials = 20000,
                     std::uint64_t seed = 0xC0FFEE);

/// Special-function identity suite behind the `selftest` subcommand: the
/// exponential, unit-step, regularized-incomplete-gamma and scaled-erfc
/// closed forms of the kernel evaluator.  Prints one PASS/FAIL line per
/// identity to `out` and returns the number of failures.
int run_selftest(std::ostream& out);

/// Decimal form with 17 significant digits; strtod round-trips it exactly.
std::string csv_number(double x);

} // namespace udn
