// SPDX-License-Identifier: Apache-2.0

#include "udn/sweep.hpp"

#include "udn/coverage.hpp"
#include "udn/errors.hpp"
#include "udn/fading.hpp"
#include "udn/foxh.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace udn;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::string> split_lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        out.push_back(line);
    return out;
}

// Comma split honoring double-quoted fields (error messages may hold commas).
std::vector<std::string> split_fields(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Rows with the wall-clock column blanked, for determinism comparisons.
std::string strip_seconds(const std::string& csv, std::size_t seconds_col)
{
    std::string out;
    for (const std::string& line : split_lines(csv)) {
        auto fields = split_fields(line);
        if (seconds_col < fields.size())
            fields[seconds_col].clear();
        for (std::size_t i = 0; i < fields.size(); ++i)
            out += (i ? "," : "") + fields[i];
        out += '\n';
    }
    return out;
}

NetworkModel rayleigh_strongest()
{
    NetworkModel net;
    net.path_loss = Unbounded{4.0};
    net.association = StrongestBS{};
    Tier t;
    t.density = 1e-3;
    t.fading = make_gamma(1.0);
    t.interferer_fading = t.fading;
    net.tiers = {t};
    return net;
}

const char* kBaseConfig = R"(# example sweep
variable = beta
grid = 1, 2, 4, 8
engines = closest, simulate
seed = 0xBEEF
trials = 5000
tol = 1e-7

[network]
path_loss = bounded(alpha = 3.5)
noise = 2e-9
association = closest

[tier]
density = 1e-4
power = 50
threshold = 1
fading = gamma(m=1.5)   # interferer side defaults to this
antennas = 2

[tier]
density = 2e-4
power = 1
threshold = 2
fading = rice(k=4)
interferer_fading = gamma(m=2)
miso_gain = gamma_gain(shape=4, scale=0.5)
)";

template <typename Fn> std::string config_error(Fn&& fn)
{
    try {
        fn();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("csv_number round-trips doubles exactly")
{
    for (double x : {0.0, 1.0 / 3.0, 2.0 / kPi, 1e-300, 6.02214076e23,
                     0.1 + 0.2, -123.456e-7, 1.0}) {
        const std::string s = csv_number(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(std::signbit(std::strtod(csv_number(-0.0).c_str(), nullptr)));
}

TEST_CASE("config grammar populates every section")
{
    const SweepSpec spec = parse_sweep(kBaseConfig, "base.cfg");

    CHECK(spec.variable == SweepVariable::Beta);
    CHECK(spec.grid == std::vector<double>{1.0, 2.0, 4.0, 8.0});
    REQUIRE(spec.engines.size() == 2);
    CHECK(spec.engines[0] == SweepEngine::Closest);
    CHECK(spec.engines[1] == SweepEngine::Simulate);
    CHECK(spec.seed == 0xBEEF);
    CHECK(spec.trials == 5000);
    CHECK(spec.tol == 1e-7);

    const auto* bd = std::get_if<Bounded>(&spec.base.path_loss);
    REQUIRE(bd != nullptr);
    CHECK(bd->alpha == 3.5);
    CHECK(spec.base.noise == 2e-9);
    CHECK(std::holds_alternative<ClosestBS>(spec.base.association));

    REQUIRE(spec.base.tiers.size() == 2);
    const Tier& t0 = spec.base.tiers[0];
    CHECK(t0.density == 1e-4);
    CHECK(t0.power == 50.0);
    CHECK(t0.threshold == 1.0);
    CHECK(describe(t0.fading) == "gamma(m=1.5)");
    CHECK(describe(t0.interferer_fading) == "gamma(m=1.5)"); // defaulted
    CHECK(t0.antennas == 2);
    CHECK(!t0.miso_gain);

    const Tier& t1 = spec.base.tiers[1];
    CHECK(describe(t1.fading) == "rice(k=4)");
    CHECK(describe(t1.interferer_fading) == "gamma(m=2)"); // explicit
    REQUIRE(t1.miso_gain.has_value());
    CHECK(t1.miso_gain->shape == 4.0);
    CHECK(t1.miso_gain->scale == 0.5);

    validate_sweep(spec); // the example is fully runnable
}

TEST_CASE("config grammar covers every variant and grid form")
{
    const SweepSpec td = parse_sweep(R"(
variable = h
grid = linspace(0.5, 2.5, 5)
engines = threed
[network]
path_loss = threed(alpha=4, h=1.5)
[tier]
density = 1
)");
    const auto* t = std::get_if<ThreeD>(&td.base.path_loss);
    REQUIRE(t != nullptr);
    CHECK(t->alpha == 4.0);
    CHECK(t->height == 1.5);
    REQUIRE(td.grid.size() == 5);
    CHECK(td.grid.front() == 0.5);
    CHECK(td.grid.back() == 2.5);
    CHECK(td.grid[2] == doctest::Approx(1.5).epsilon(1e-15));
    validate_sweep(td);

    const SweepSpec mw = parse_sweep(R"(
variable = tau
grid = logspace(0.01, 1, 9)
engines = simulate
[network]
path_loss = mmwave(alpha_los=2.1, alpha_nlos=4, tau=0.3, d=0.5, wl=0.01, fc=28)
association = closest
[tier]
density = 0.05
antennas = 8
)");
    const auto* m = std::get_if<MmWave>(&mw.base.path_loss);
    REQUIRE(m != nullptr);
    CHECK(m->alpha_los == 2.1);
    CHECK(m->alpha_nlos == 4.0);
    CHECK(m->blockage == 0.3);
    CHECK(m->spacing == 0.5);
    CHECK(m->wavelength == 0.01);
    CHECK(m->carrier == 28.0);
    REQUIRE(mw.grid.size() == 9);
    CHECK(mw.grid.front() == 0.01);
    CHECK(mw.grid.back() == 1.0);
    // log spacing: constant successive ratio
    CHECK(mw.grid[1] / mw.grid[0] ==
          doctest::Approx(mw.grid[8] / mw.grid[7]).epsilon(1e-12));

    const SweepSpec fx = parse_sweep(R"(
grid = 10
engines = adhoc
[network]
path_loss = unbounded(alpha=4)
association = fixed(r=10)
[tier]
density = 1e-3
)");
    const auto* f = std::get_if<FixedDistance>(&fx.base.association);
    REQUIRE(f != nullptr);
    CHECK(f->r == 10.0);
}

TEST_CASE("malformed configs fail with located field diagnostics")
{
    const auto parse = [](const char* text) { (void)parse_sweep(text, "bad.cfg"); };

    SUBCASE("unknown top-level key names itself and its line")
    {
        const std::string msg =
            config_error([&] { parse("variable = beta\nbogus = 1\n"); });
        CHECK(msg.find("bad.cfg:2:") != std::string::npos);
        CHECK(msg.find("bogus") != std::string::npos);
    }
    SUBCASE("malformed fading spec names the field")
    {
        const std::string msg = config_error(
            [&] { parse("[tier]\nfading = gamma(m=-1)\n"); });
        CHECK(msg.find("bad.cfg:2:") != std::string::npos);
        CHECK(msg.find("'m'") != std::string::npos);
    }
    SUBCASE("grid must increase")
    {
        CHECK_THROWS_WITH_AS(parse("grid = 1, 3, 2\n"),
                             doctest::Contains("strictly increasing"),
                             ConfigError);
    }
    SUBCASE("logspace endpoints must be positive")
    {
        CHECK_THROWS_WITH_AS(parse("grid = logspace(0, 1, 4)\n"),
                             doctest::Contains("positive"), ConfigError);
    }
    SUBCASE("grid point count must be an integer >= 2")
    {
        CHECK_THROWS_WITH_AS(parse("grid = logspace(1, 2, 2.5)\n"),
                             doctest::Contains("points"), ConfigError);
    }
    SUBCASE("unknown engine lists the valid names")
    {
        CHECK_THROWS_WITH_AS(parse("engines = fastest\n"),
                             doctest::Contains("fastest"), ConfigError);
    }
    SUBCASE("duplicate engines rejected")
    {
        CHECK_THROWS_WITH_AS(parse("engines = closest, closest\n"),
                             doctest::Contains("duplicate"), ConfigError);
    }
    SUBCASE("missing '=' rejected")
    {
        CHECK_THROWS_WITH_AS(parse("[network]\nnoise 2\n"),
                             doctest::Contains("key = value"), ConfigError);
    }
    SUBCASE("unknown section rejected")
    {
        CHECK_THROWS_WITH_AS(parse("[links]\n"), doctest::Contains("[links]"),
                             ConfigError);
    }
    SUBCASE("tier keys outside a tier section rejected")
    {
        CHECK_THROWS_WITH_AS(parse("density = 1\n"),
                             doctest::Contains("density"), ConfigError);
    }
    SUBCASE("unknown call fields rejected")
    {
        CHECK_THROWS_WITH_AS(
            parse("[network]\npath_loss = bounded(exponent=4)\n"),
            doctest::Contains("exponent"), ConfigError);
        CHECK_THROWS_WITH_AS(parse("[tier]\nmiso_gain = gamma_gain(scale=1)\n"),
                             doctest::Contains("shape"), ConfigError);
    }
    SUBCASE("empty values rejected")
    {
        CHECK_THROWS_WITH_AS(parse("trials =\n"), doctest::Contains("trials"),
                             ConfigError);
    }
    SUBCASE("numbers must parse in full")
    {
        CHECK_THROWS_WITH_AS(parse("trials = 12k\n"),
                             doctest::Contains("trials"), ConfigError);
        CHECK_THROWS_WITH_AS(parse("trials = 2.5\n"),
                             doctest::Contains("integer"), ConfigError);
    }
}

TEST_CASE("--set overrides reach every section")
{
    const std::vector<std::string> overrides = {
        "trials=9000",
        "network.noise=0.25",
        "tier0.power=7",
        "tier1.fading=gamma(m=3)",
        "engines=strongest",
        "network.association=strongest",
        "network.path_loss=unbounded(alpha=4)",
    };
    const SweepSpec spec = parse_sweep(kBaseConfig, "base.cfg", overrides);
    CHECK(spec.trials == 9000);
    CHECK(spec.base.noise == 0.25);
    CHECK(spec.base.tiers[0].power == 7.0);
    CHECK(describe(spec.base.tiers[1].fading) == "gamma(m=3)");
    // tier 1 declared interferer_fading explicitly, so it is preserved
    CHECK(describe(spec.base.tiers[1].interferer_fading) == "gamma(m=2)");
    REQUIRE(spec.engines.size() == 1);
    CHECK(spec.engines[0] == SweepEngine::Strongest);
    CHECK(std::holds_alternative<StrongestBS>(spec.base.association));

    // overriding a tier's fading with no explicit interferer updates both
    const SweepSpec spec2 =
        parse_sweep(kBaseConfig, "base.cfg", {"tier0.fading=gamma(m=4)"});
    CHECK(describe(spec2.base.tiers[0].interferer_fading) == "gamma(m=4)");

    CHECK_THROWS_WITH_AS(
        (void)parse_sweep(kBaseConfig, "base.cfg", {"tier5.power=1"}),
        doctest::Contains("out of range"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_sweep(kBaseConfig, "base.cfg", {"power"}),
                         doctest::Contains("key=value"), ConfigError);
}

TEST_CASE("apply_variable substitutes each swept quantity")
{
    NetworkModel base = rayleigh_strongest();
    base.tiers.push_back(base.tiers[0]);
    base.tiers[1].miso_gain = GammaGain{2.0, 1.0};

    SUBCASE("density and threshold reach every tier")
    {
        const NetworkModel a = apply_variable(base, SweepVariable::Lambda, 0.5);
        CHECK(a.tiers[0].density == 0.5);
        CHECK(a.tiers[1].density == 0.5);
        const NetworkModel b = apply_variable(base, SweepVariable::Beta, 3.0);
        CHECK(b.tiers[0].threshold == 3.0);
        CHECK(b.tiers[1].threshold == 3.0);
    }
    SUBCASE("antenna count rounds; serving-gain shape keeps the exact value")
    {
        const NetworkModel a = apply_variable(base, SweepVariable::Antennas, 6.4);
        CHECK(a.tiers[0].antennas == 6);
        CHECK(!a.tiers[0].miso_gain);
        REQUIRE(a.tiers[1].miso_gain.has_value());
        CHECK(a.tiers[1].miso_gain->shape == 6.4);
    }
    SUBCASE("Rice sweep touches only the first tier, both link sides")
    {
        const NetworkModel a =
            apply_variable(base, SweepVariable::RiceFactor, 2.0);
        CHECK(describe(a.tiers[0].fading) == "rice(k=2)");
        CHECK(describe(a.tiers[0].interferer_fading) == "rice(k=2)");
        CHECK(describe(a.tiers[1].fading) == "gamma(m=1)");
        CHECK(variable_value(a, SweepVariable::RiceFactor) == 2.0);
        // large factors extend the mixture instead of overflowing it
        const NetworkModel big =
            apply_variable(base, SweepVariable::RiceFactor, 100.0);
        CHECK(big.tiers[0].fading.mixture.size() > 64);
    }
    SUBCASE("height and blockage need their variants")
    {
        CHECK_THROWS_AS((void)apply_variable(base, SweepVariable::Height, 1.0),
                        NotApplicable);
        CHECK_THROWS_AS((void)apply_variable(base, SweepVariable::Blockage, 1.0),
                        NotApplicable);
        NetworkModel td = base;
        td.path_loss = ThreeD{4.0, 0.5};
        const NetworkModel a = apply_variable(td, SweepVariable::Height, 2.0);
        CHECK(std::get<ThreeD>(a.path_loss).height == 2.0);
        CHECK(variable_value(a, SweepVariable::Height) == 2.0);
        NetworkModel mw = base;
        mw.path_loss = MmWave{};
        const NetworkModel b = apply_variable(mw, SweepVariable::Blockage, 0.7);
        CHECK(std::get<MmWave>(b.path_loss).blockage == 0.7);
        CHECK(variable_value(b, SweepVariable::Blockage) == 0.7);
    }
    SUBCASE("variable_value reads the base point back")
    {
        CHECK(variable_value(base, SweepVariable::Lambda) == 1e-3);
        CHECK(variable_value(base, SweepVariable::Beta) == 1.0);
        CHECK(variable_value(base, SweepVariable::Antennas) == 1.0);
        CHECK_THROWS_AS((void)variable_value(base, SweepVariable::RiceFactor),
                        NotApplicable);
    }
}

TEST_CASE("validate_sweep rejects structural mistakes")
{
    SweepSpec spec;
    spec.base = rayleigh_strongest();
    spec.grid = {1.0, 2.0};
    spec.engines = {SweepEngine::Strongest};
    spec.variable = SweepVariable::Beta;
    validate_sweep(spec);

    SUBCASE("grid is required, increasing, and inside the variable's domain")
    {
        SweepSpec s = spec;
        s.grid.clear();
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("non-empty"),
                             ConfigError);
        s.grid = {2.0, 1.0};
        CHECK_THROWS_WITH_AS(validate_sweep(s),
                             doctest::Contains("strictly increasing"),
                             ConfigError);
        s.grid = {-1.0, 2.0};
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("domain"),
                             ConfigError);
        s.variable = SweepVariable::Antennas;
        s.grid = {0.5, 2.0};
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("domain"),
                             ConfigError);
    }
    SUBCASE("engines must exist, be unique, and fit the network")
    {
        SweepSpec s = spec;
        s.engines.clear();
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("non-empty"),
                             ConfigError);
        s.engines = {SweepEngine::Strongest, SweepEngine::Strongest};
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("duplicate"),
                             ConfigError);
        s.engines = {SweepEngine::AdHoc};
        CHECK_THROWS_WITH_AS(validate_sweep(s),
                             doctest::Contains("fixed-distance"), ConfigError);
        s.engines = {SweepEngine::MisoBounded};
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("bounded"),
                             ConfigError);
    }
    SUBCASE("simulation trials floor")
    {
        SweepSpec s = spec;
        s.engines = {SweepEngine::Simulate};
        s.trials = 999;
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("1000"),
                             ConfigError);
    }
    SUBCASE("variable/variant compatibility")
    {
        SweepSpec s = spec;
        s.variable = SweepVariable::Height;
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("threed"),
                             ConfigError);
        s.variable = SweepVariable::Blockage;
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("mmwave"),
                             ConfigError);
    }
    SUBCASE("the base network itself is validated")
    {
        SweepSpec s = spec;
        s.base.tiers[0].density = -1.0;
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("network"),
                             ConfigError);
        s.base.tiers.clear();
        CHECK_THROWS_WITH_AS(validate_sweep(s), doctest::Contains("tier"),
                             ConfigError);
    }
}

TEST_CASE("run_sweep emits the documented schema deterministically")
{
    SweepSpec spec;
    spec.base = rayleigh_strongest();
    spec.variable = SweepVariable::Lambda;
    spec.grid = {1e-4, 1e-3, 1e-2};
    spec.engines = {SweepEngine::Strongest, SweepEngine::Simulate};
    spec.trials = 2000;
    spec.seed = 7;

    std::ostringstream out;
    const int errors = run_sweep(spec, out);
    CHECK(errors == 0);

    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 7); // header + 3 grid points x 2 engines
    CHECK(lines[0] ==
          "variable,value,engine,coverage,residual_or_ci,trials,seconds,error");

    const std::string analytic = csv_number(2.0 / kPi);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split_fields(lines[i]);
        REQUIRE(f.size() == 8);
        CHECK(f[0] == "lambda");
        CHECK(f[7].empty()); // no error
        CHECK(std::strtod(f[6].c_str(), nullptr) >= 0.0); // seconds
        if (f[2] == "strongest") {
            CHECK(f[3] == analytic); // closed form, bit-identical
            CHECK(f[5].empty());     // no trials on analytic rows
        } else {
            REQUIRE(f[2] == "simulate");
            CHECK(f[5] == "2000");
            const double value = std::strtod(f[3].c_str(), nullptr);
            const double ci = std::strtod(f[4].c_str(), nullptr);
            CHECK(ci > 0.0);
            CHECK(std::abs(value - 2.0 / kPi) < 3.0 * ci);
        }
    }

    // grid order: values appear in ascending runs of two rows each
    CHECK(split_fields(lines[1])[1] == csv_number(1e-4));
    CHECK(split_fields(lines[3])[1] == csv_number(1e-3));
    CHECK(split_fields(lines[5])[1] == csv_number(1e-2));

    std::ostringstream again;
    CHECK(run_sweep(spec, again) == 0);
    CHECK(strip_seconds(again.str(), 6) == strip_seconds(out.str(), 6));
}

TEST_CASE("run_sweep surfaces engine failures per row and continues")
{
    // A unit-mass heavy-tail serving kernel whose coverage moment diverges:
    // chi(s) = Gamma(s) Gamma(1.4 - s), so moments need s < 1.4 while the
    // strongest engine asks for order 1 + delta = 1.5.
    FoxHParams heavy;
    heavy.upper = {{-0.4, 1.0}};
    heavy.lower = {{0.0, 1.0}};
    heavy.u = 1;
    heavy.v = 1;
    heavy.c = 2.5;
    heavy.kappa = heavy.c / std::tgamma(0.4);

    SweepSpec spec;
    spec.base = rayleigh_strongest();
    spec.base.tiers[0].fading = make_custom(heavy);
    spec.base.tiers[0].interferer_fading = make_gamma(1.0);
    spec.variable = SweepVariable::Lambda;
    spec.grid = {1e-3};
    spec.engines = {SweepEngine::Strongest, SweepEngine::Simulate};
    spec.trials = 1000;

    std::ostringstream out;
    const int errors = run_sweep(spec, out);
    CHECK(errors == 1);

    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 3);
    const auto bad = split_fields(lines[1]);
    REQUIRE(bad.size() == 8);
    CHECK(bad[2] == "strongest");
    CHECK(bad[3].empty());              // no coverage on error rows
    CHECK(!bad[7].empty());             // the failure is reported in place
    CHECK(bad[7].find("strip") != std::string::npos);
    const auto good = split_fields(lines[2]);
    REQUIRE(good.size() == 8);          // the run continued past the failure
    CHECK(good[2] == "simulate");
    CHECK(good[7].empty());
    const double value = std::strtod(good[3].c_str(), nullptr);
    CHECK(value > 0.0);
    CHECK(value <= 1.0);
}

TEST_CASE("figure recipes emit paired analytic and simulated columns")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "udn_sweep_fig_test";
    fs::remove_all(dir);

    struct Row {
        std::string curve;
        double value = 0.0;
        double analytic = 0.0;
        std::string simulated;
        double ci = 0.0;
    };
    const auto read_rows = [&](int n) {
        CHECK(reproduce_figure(n, dir.string(), 1000, 99) == 0);
        std::ifstream in(dir / ("fig" + std::to_string(n) + ".csv"));
        REQUIRE(in.good());
        std::string header;
        std::getline(in, header);
        CHECK(header == "curve,variable,value,engine,analytic,residual,"
                        "simulated,ci_half_width,trials,seconds,error");
        std::vector<Row> rows;
        std::string line;
        while (std::getline(in, line)) {
            const auto f = split_fields(line);
            REQUIRE(f.size() == 11);
            CHECK(f[10].empty()); // no error rows
            rows.push_back({f[0], std::strtod(f[2].c_str(), nullptr),
                            std::strtod(f[4].c_str(), nullptr), f[6],
                            std::strtod(f[7].c_str(), nullptr)});
        }
        return rows;
    };

    SUBCASE("two-tier association comparison: four curves, simulation agrees")
    {
        const auto rows = read_rows(1);
        CHECK(rows.size() == 28); // 7 grid points x 4 curves
        double strongest0 = 0.0, closest0 = 0.0;
        for (const Row& r : rows) {
            CHECK(!r.simulated.empty());
            const double sim = std::strtod(r.simulated.c_str(), nullptr);
            CHECK(std::abs(sim - r.analytic) < 4.0 * r.ci);
            if (r.curve == "strongest-0dB")
                strongest0 = r.analytic;
            if (r.curve == "closest-0dB")
                closest0 = r.analytic;
        }
        CHECK(strongest0 > closest0); // max-SIR dominates the fixed candidate
    }
    SUBCASE("antenna-scaling recipe orders the regimes at high density")
    {
        const auto rows = read_rows(6);
        double largest = 0.0;
        for (const Row& r : rows)
            largest = std::max(largest, r.value);
        double super = -1.0, linear = -1.0, sub = -1.0, constant = -1.0;
        for (const Row& r : rows) {
            if (r.value != largest)
                continue;
            if (r.curve == "superlinear")
                super = r.analytic;
            else if (r.curve == "linear")
                linear = r.analytic;
            else if (r.curve == "sublinear")
                sub = r.analytic;
            else if (r.curve == "constant")
                constant = r.analytic;
        }
        CHECK(super > linear);
        CHECK(linear > sub);
        CHECK(sub > constant);
    }
    SUBCASE("elevation recipe is non-increasing in height for every curve")
    {
        const auto rows = read_rows(7);
        // rows arrive in grid order; track the previous value per curve
        std::vector<std::pair<std::string, double>> last;
        for (const Row& r : rows) {
            bool found = false;
            for (auto& [curve, value] : last) {
                if (curve == r.curve) {
                    CHECK(r.analytic <= value + 1e-12);
                    value = r.analytic;
                    found = true;
                }
            }
            if (!found)
                last.emplace_back(r.curve, r.analytic);
        }
        CHECK(last.size() == 4); // one curve per antenna count
    }

    fs::remove_all(dir);
}

TEST_CASE("selftest reports every identity as passing")
{
    std::ostringstream out;
    CHECK(run_selftest(out) == 0);
    const std::string text = out.str();
    std::size_t passes = 0, pos = 0;
    while ((pos = text.find("[PASS]", pos)) != std::string::npos) {
        ++passes;
        pos += 6;
    }
    CHECK(passes == 4);
    CHECK(text.find("[FAIL]") == std::string::npos);
}
