// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: kernel evaluation, analytic coverage, Monte Carlo
// simulation, config-driven sweeps, bundled figure recipes and a selftest.
//
// Exit codes: 0 clean, 1 when any CSV row carries an error, 2 on config or
// usage failures diagnosed before rows run.

#include "udn/errors.hpp"
#include "udn/foxh.hpp"
#include "udn/sweep.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

// The analytic engines applicable to this network's variant and association.
std::vector<udn::SweepEngine> analytic_engines(const udn::NetworkModel& net)
{
    std::vector<udn::SweepEngine> out;
    for (udn::SweepEngine e :
         {udn::SweepEngine::Closest, udn::SweepEngine::Strongest,
          udn::SweepEngine::AdHoc, udn::SweepEngine::MisoBounded,
          udn::SweepEngine::MmWave, udn::SweepEngine::ThreeD})
        if (udn::engine_supports(e, net))
            out.push_back(e);
    return out;
}

// Single-point front ends evaluate the variable at its current base value.
void fill_single_point(udn::SweepSpec& spec)
{
    if (spec.grid.empty())
        spec.grid = {udn::variable_value(spec.base, spec.variable)};
}

int run_to(const udn::SweepSpec& spec, const std::string& out_path)
{
    if (out_path.empty() || out_path == "-")
        return udn::run_sweep(spec, std::cout);
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw udn::ConfigError(out_path + ": cannot open output file");
    return udn::run_sweep(spec, out);
}

const char* route_name(udn::EvalInfo::Route route)
{
    switch (route) {
    case udn::EvalInfo::Route::contour:
        return "contour";
    case udn::EvalInfo::Route::series_left:
        return "series_left";
    case udn::EvalInfo::Route::series_right:
        return "series_right";
    case udn::EvalInfo::Route::limit:
        return "limit";
    }
    return "?";
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"stochastic-geometry coverage toolkit: analytic engines, "
                 "Monte Carlo simulation, parameter sweeps and figure recipes"};
    app.require_subcommand(1);

    std::uint64_t seed = 0xC0FFEE;
    long trials = 200000;
    double tol = 1e-6;
    int threads = 1;
    std::vector<std::string> sets;
    auto* seed_opt =
        app.add_option("--seed", seed, "Monte Carlo master seed")
            ->capture_default_str();
    auto* trials_opt =
        app.add_option("--trials", trials, "Monte Carlo trials per row")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    auto* tol_opt = app.add_option("--tol", tol, "analytic-engine tolerance")
                        ->capture_default_str();
    app.add_option("--threads", threads,
                   "worker cap (accepted for interface stability; rows run "
                   "sequentially)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--set", sets, "config override key=value (repeatable)");

    // eval-foxh ------------------------------------------------------------
    double kappa = 1.0, scale_c = 1.0;
    std::vector<double> upper_a, upper_scale, lower_b, lower_scale, points;
    int u = 0, v = 0;
    auto* cmd_eval = app.add_subcommand(
        "eval-foxh", "evaluate kappa * H(c x) for a gamma-ratio kernel");
    cmd_eval->fallthrough();
    cmd_eval->add_option("--kappa", kappa, "density prefactor")
        ->capture_default_str();
    cmd_eval->add_option("--c", scale_c, "argument scale")->capture_default_str();
    cmd_eval->add_option("--a", upper_a, "upper-row shifts");
    cmd_eval->add_option("--A", upper_scale, "upper-row scales");
    cmd_eval->add_option("--b", lower_b, "lower-row shifts");
    cmd_eval->add_option("--B", lower_scale, "lower-row scales");
    cmd_eval->add_option("--u", u, "count of leading lower rows")->required();
    cmd_eval->add_option("--v", v, "count of leading upper rows")->required();
    cmd_eval->add_option("--x", points, "evaluation points")->required();

    // coverage / simulate / sweep -------------------------------------------
    std::string cfg_path, out_path;
    auto* cmd_cov = app.add_subcommand(
        "coverage", "analytic coverage for a config (all applicable engines)");
    cmd_cov->fallthrough();
    cmd_cov->add_option("config", cfg_path, "config file")
        ->required()
        ->check(CLI::ExistingFile);

    auto* cmd_sim =
        app.add_subcommand("simulate", "Monte Carlo coverage for a config");
    cmd_sim->fallthrough();
    cmd_sim->add_option("config", cfg_path, "config file")
        ->required()
        ->check(CLI::ExistingFile);

    auto* cmd_sweep =
        app.add_subcommand("sweep", "run a config-driven parameter sweep");
    cmd_sweep->fallthrough();
    cmd_sweep->add_option("config", cfg_path, "config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_sweep->add_option("--out", out_path, "output CSV path (default stdout)");

    // figure ----------------------------------------------------------------
    int figure_n = 1;
    std::string figure_dir = ".";
    auto* cmd_fig = app.add_subcommand(
        "figure", "write fig<n>.csv for one of the bundled example recipes");
    cmd_fig->fallthrough();
    cmd_fig->add_option("n", figure_n, "figure number")
        ->required()
        ->check(CLI::Range(1, 7));
    cmd_fig->add_option("--out", figure_dir, "output directory")
        ->capture_default_str();

    auto* cmd_self =
        app.add_subcommand("selftest", "special-function identity suite");
    cmd_self->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        // Dedicated flags take precedence over config files and --set items.
        std::vector<std::string> overrides = sets;
        if (seed_opt->count())
            overrides.push_back("seed=" + std::to_string(seed));
        if (trials_opt->count())
            overrides.push_back("trials=" + std::to_string(trials));
        if (tol_opt->count())
            overrides.push_back("tol=" + udn::csv_number(tol));

        if (*cmd_eval) {
            if (upper_a.size() != upper_scale.size())
                throw udn::ConfigError(
                    "eval-foxh: --a and --A must have equal length");
            if (lower_b.size() != lower_scale.size())
                throw udn::ConfigError(
                    "eval-foxh: --b and --B must have equal length");
            udn::FoxHParams params;
            params.kappa = kappa;
            params.c = scale_c;
            for (std::size_t i = 0; i < upper_a.size(); ++i)
                params.upper.push_back({upper_a[i], upper_scale[i]});
            for (std::size_t i = 0; i < lower_b.size(); ++i)
                params.lower.push_back({lower_b[i], lower_scale[i]});
            params.u = u;
            params.v = v;
            udn::validate(params);
            const double eval_tol = tol_opt->count() ? tol : 1e-9;
            std::cout << "x,value,residual,evaluations,route\n";
            for (double x : points) {
                udn::EvalInfo info;
                const double value =
                    kappa * udn::eval(params, scale_c * x, eval_tol, &info);
                std::cout << udn::csv_number(x) << ',' << udn::csv_number(value)
                          << ',' << udn::csv_number(info.residual) << ','
                          << info.evaluations << ',' << route_name(info.route)
                          << '\n';
            }
            return 0;
        }
        if (*cmd_cov) {
            udn::SweepSpec spec = udn::parse_sweep_file(cfg_path, overrides);
            if (spec.engines.empty())
                spec.engines = analytic_engines(spec.base);
            if (spec.engines.empty())
                throw udn::ConfigError(
                    cfg_path + ": no analytic engine applies to this network "
                               "(check association and path_loss)");
            fill_single_point(spec);
            return udn::run_sweep(spec, std::cout) > 0 ? 1 : 0;
        }
        if (*cmd_sim) {
            udn::SweepSpec spec = udn::parse_sweep_file(cfg_path, overrides);
            spec.engines = {udn::SweepEngine::Simulate};
            fill_single_point(spec);
            return udn::run_sweep(spec, std::cout) > 0 ? 1 : 0;
        }
        if (*cmd_sweep) {
            const udn::SweepSpec spec = udn::parse_sweep_file(cfg_path, overrides);
            return run_to(spec, out_path) > 0 ? 1 : 0;
        }
        if (*cmd_fig) {
            const long fig_trials = trials_opt->count() ? trials : 20000;
            const int errors =
                udn::reproduce_figure(figure_n, figure_dir, fig_trials, seed);
            std::cerr << "wrote " << figure_dir << "/fig" << figure_n
                      << ".csv (" << errors << " error rows)\n";
            return errors > 0 ? 1 : 0;
        }
        if (*cmd_self)
            return udn::run_selftest(std::cout) > 0 ? 1 : 0;
    } catch (const udn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
