// SPDX-License-Identifier: Apache-2.0
//
// Sweep configs, engine dispatch, CSV emission, figure recipes and the
// identity selftest.  The text grammar is line-based: `key = value` pairs,
// `#` comments, a `[network]` section and one `[tier]` section per tier;
// values reuse the fading module's `name(field=value, ...)` call syntax.

#include "udn/sweep.hpp"

#include "udn/coverage.hpp"
#include "udn/errors.hpp"
#include "udn/foxh.hpp"
#include "udn/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

namespace udn {

namespace {

// ---------------------------------------------------------------------------
// Diagnostics plumbing: every parse failure carries "<origin>:<line>:".

struct Cursor {
    std::string origin;
    int line = 0;
};

[[noreturn]] void fail(const Cursor& at, const std::string& msg)
{
    if (at.line > 0)
        throw ConfigError(at.origin + ":" + std::to_string(at.line) + ": " + msg);
    throw ConfigError(at.origin + ": " + msg);
}

// ---------------------------------------------------------------------------
// Low-level text utilities.

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

// Splits on commas at bracket depth zero, so list-valued call arguments
// (e.g. custom-kernel parameter lists) survive intact.
std::vector<std::string> split_top(const std::string& s)
{
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(' || c == '[')
            ++depth;
        else if (c == ')' || c == ']')
            --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_num(const Cursor& at, const std::string& field, const std::string& text)
{
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
        fail(at, field + ": expected a number, got '" + text + "'");
    if (!std::isfinite(v))
        fail(at, field + ": value must be finite, got '" + text + "'");
    return v;
}

long parse_int(const Cursor& at, const std::string& field, const std::string& text)
{
    const double v = parse_num(at, field, text);
    const double n = std::round(v);
    if (std::abs(v - n) > 1e-9 * std::max(1.0, std::abs(v)))
        fail(at, field + ": expected an integer, got '" + text + "'");
    return static_cast<long>(n);
}

std::uint64_t parse_seed(const Cursor& at, const std::string& field,
                         const std::string& text)
{
    if (text.empty() || text.find('-') != std::string::npos)
        fail(at, field + ": expected a non-negative integer, got '" + text + "'");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 0);
    if (end != text.c_str() + text.size() || errno == ERANGE)
        fail(at, field + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

// ---------------------------------------------------------------------------
// Call syntax `name` / `name(arg, key=value, ...)` shared by path-loss,
// association, serving-gain and grid values.

struct Call {
    std::string name;
    bool has_args = false;
    std::vector<std::pair<std::string, std::string>> args; // empty key: positional
};

bool valid_ident(const std::string& s)
{
    if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_'))
        return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

Call parse_call(const Cursor& at, const std::string& field, const std::string& text)
{
    Call call;
    const auto open = text.find('(');
    call.name = lower(trim(text.substr(0, open)));
    if (!valid_ident(call.name))
        fail(at, field + ": expected a name, got '" + text + "'");
    if (open == std::string::npos)
        return call;
    if (text.back() != ')')
        fail(at, field + ": missing ')' in '" + text + "'");
    call.has_args = true;
    const std::string inner = trim(text.substr(open + 1, text.size() - open - 2));
    if (inner.empty())
        return call;
    for (const std::string& part : split_top(inner)) {
        // Split at the first '=' outside brackets; list values contain none.
        std::size_t eq = std::string::npos;
        int depth = 0;
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (part[i] == '(' || part[i] == '[')
                ++depth;
            else if (part[i] == ')' || part[i] == ']')
                --depth;
            else if (part[i] == '=' && depth == 0) {
                eq = i;
                break;
            }
        }
        if (eq == std::string::npos) {
            call.args.emplace_back("", trim(part));
        } else {
            const std::string key = lower(trim(part.substr(0, eq)));
            const std::string val = trim(part.substr(eq + 1));
            if (key.empty() || val.empty())
                fail(at, field + ": malformed argument '" + part + "'");
            call.args.emplace_back(key, val);
        }
    }
    return call;
}

/// Keyed/positional access over a Call's arguments with unknown-field
/// rejection; every accessor failure names the enclosing field.
class Args {
public:
    Args(const Cursor& at, std::string field, const Call& call)
        : at_(at), field_(std::move(field)), call_(call), used_(call.args.size(), false)
    {
    }

    double need(const char* key)
    {
        const auto v = find(key);
        if (!v)
            fail(at_, field_ + ": missing field '" + key + "'");
        return parse_num(at_, field_ + "." + key, *v);
    }

    double get(const char* key, double fallback)
    {
        const auto v = find(key);
        return v ? parse_num(at_, field_ + "." + key, *v) : fallback;
    }

    double positional(std::size_t index, const char* what)
    {
        std::size_t seen = 0;
        for (std::size_t i = 0; i < call_.args.size(); ++i) {
            if (!call_.args[i].first.empty())
                continue;
            if (seen++ == index) {
                used_[i] = true;
                return parse_num(at_, field_ + "." + what, call_.args[i].second);
            }
        }
        fail(at_, field_ + ": missing argument '" + what + "'");
    }

    void finish()
    {
        for (std::size_t i = 0; i < call_.args.size(); ++i)
            if (!used_[i]) {
                if (call_.args[i].first.empty())
                    fail(at_, field_ + ": unexpected argument '" +
                                  call_.args[i].second + "'");
                fail(at_, field_ + ": unknown field '" + call_.args[i].first + "'");
            }
    }

private:
    std::optional<std::string> find(const char* key)
    {
        for (std::size_t i = 0; i < call_.args.size(); ++i)
            if (!used_[i] && call_.args[i].first == key) {
                used_[i] = true;
                return call_.args[i].second;
            }
        return std::nullopt;
    }

    const Cursor& at_;
    std::string field_;
    const Call& call_;
    std::vector<bool> used_;
};

// ---------------------------------------------------------------------------
// Name tables.

constexpr struct {
    const char* name;
    SweepVariable variable;
} kVariables[] = {
    {"lambda", SweepVariable::Lambda},     {"beta", SweepVariable::Beta},
    {"n_t", SweepVariable::Antennas},      {"h", SweepVariable::Height},
    {"k_factor", SweepVariable::RiceFactor}, {"tau", SweepVariable::Blockage},
};

constexpr struct {
    const char* name;
    SweepEngine engine;
} kEngines[] = {
    {"closest", SweepEngine::Closest},
    {"strongest", SweepEngine::Strongest},
    {"adhoc", SweepEngine::AdHoc},
    {"miso_bounded", SweepEngine::MisoBounded},
    {"mmwave", SweepEngine::MmWave},
    {"threed", SweepEngine::ThreeD},
    {"simulate", SweepEngine::Simulate},
};

SweepVariable parse_variable(const Cursor& at, const std::string& text)
{
    const std::string name = lower(text);
    for (const auto& row : kVariables)
        if (name == row.name)
            return row.variable;
    fail(at, "variable: unknown quantity '" + text +
                 "' (expected lambda, beta, n_t, h, k_factor, tau)");
}

SweepEngine parse_engine(const Cursor& at, const std::string& text)
{
    const std::string name = lower(text);
    for (const auto& row : kEngines)
        if (name == row.name)
            return row.engine;
    fail(at, "engines: unknown engine '" + text +
                 "' (expected closest, strongest, adhoc, miso_bounded, mmwave, "
                 "threed, simulate)");
}

// ---------------------------------------------------------------------------
// Field parsers.

std::vector<double> parse_grid(const Cursor& at, const std::string& text)
{
    if (text.find('(') != std::string::npos) {
        const Call call = parse_call(at, "grid", text);
        if (call.name != "logspace" && call.name != "linspace")
            fail(at, "grid: unknown spacing '" + call.name +
                         "' (expected logspace, linspace, or a comma list)");
        Args args(at, "grid", call);
        const double first = args.positional(0, "first");
        const double last = args.positional(1, "last");
        const double points = args.positional(2, "points");
        args.finish();
        const long n = std::lround(points);
        if (std::abs(points - static_cast<double>(n)) > 1e-9 || n < 2)
            fail(at, "grid: points must be an integer >= 2");
        if (!(last > first))
            fail(at, "grid: last must exceed first");
        std::vector<double> out(static_cast<std::size_t>(n));
        if (call.name == "logspace") {
            if (!(first > 0.0))
                fail(at, "grid: logspace endpoints must be positive");
            const double la = std::log(first), lb = std::log(last);
            for (long i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    std::exp(la + (lb - la) * static_cast<double>(i) /
                                      static_cast<double>(n - 1));
        } else {
            for (long i = 0; i < n; ++i)
                out[static_cast<std::size_t>(i)] =
                    first + (last - first) * static_cast<double>(i) /
                                static_cast<double>(n - 1);
        }
        out.front() = first;
        out.back() = last;
        return out;
    }
    std::vector<double> out;
    for (const std::string& part : split_top(text))
        out.push_back(parse_num(at, "grid", part));
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1]))
            fail(at, "grid: values must be strictly increasing");
    return out;
}

std::vector<SweepEngine> parse_engines(const Cursor& at, const std::string& text)
{
    std::vector<SweepEngine> out;
    for (const std::string& part : split_top(text)) {
        const SweepEngine e = parse_engine(at, part);
        if (std::find(out.begin(), out.end(), e) != out.end())
            fail(at, "engines: duplicate engine '" + part + "'");
        out.push_back(e);
    }
    return out;
}

PathLoss parse_path_loss(const Cursor& at, const std::string& text)
{
    const Call call = parse_call(at, "path_loss", text);
    Args args(at, "path_loss", call);
    if (call.name == "unbounded") {
        Unbounded p;
        p.alpha = args.need("alpha");
        args.finish();
        return p;
    }
    if (call.name == "bounded") {
        Bounded p;
        p.alpha = args.need("alpha");
        args.finish();
        return p;
    }
    if (call.name == "threed") {
        ThreeD p;
        p.alpha = args.need("alpha");
        p.height = args.need("h");
        args.finish();
        return p;
    }
    if (call.name == "mmwave") {
        MmWave p;
        p.alpha_los = args.need("alpha_los");
        p.alpha_nlos = args.need("alpha_nlos");
        p.blockage = args.need("tau");
        p.spacing = args.get("d", 0.5);
        p.wavelength = args.get("wl", 1.0);
        p.carrier = args.get("fc", 1.0);
        args.finish();
        return p;
    }
    fail(at, "path_loss: unknown variant '" + call.name +
                 "' (expected unbounded, bounded, threed, mmwave)");
}

Association parse_association(const Cursor& at, const std::string& text)
{
    const Call call = parse_call(at, "association", text);
    Args args(at, "association", call);
    if (call.name == "closest") {
        args.finish();
        return ClosestBS{};
    }
    if (call.name == "strongest") {
        args.finish();
        return StrongestBS{};
    }
    if (call.name == "fixed") {
        FixedDistance fd;
        fd.r = args.need("r");
        args.finish();
        if (!(fd.r > 0.0))
            fail(at, "association: field 'r' must be positive");
        return fd;
    }
    fail(at, "association: unknown rule '" + call.name +
                 "' (expected closest, strongest, fixed)");
}

std::optional<GammaGain> parse_miso_gain(const Cursor& at, const std::string& text)
{
    if (lower(text) == "none")
        return std::nullopt;
    const Call call = parse_call(at, "miso_gain", text);
    if (call.name != "gamma_gain")
        fail(at, "miso_gain: unknown form '" + call.name +
                     "' (expected gamma_gain or none)");
    Args args(at, "miso_gain", call);
    GammaGain g;
    g.shape = args.need("shape");
    g.scale = args.get("scale", 1.0);
    args.finish();
    if (!(g.shape > 0.0) || !(g.scale > 0.0))
        fail(at, "miso_gain: shape and scale must be positive");
    return g;
}

FadingModel parse_fading_field(const Cursor& at, const std::string& key,
                               const std::string& text)
{
    try {
        return parse_fading(text);
    } catch (const Error& e) {
        fail(at, key + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Section handlers shared by the file parser and `--set` overrides.

struct ParseState {
    SweepSpec spec;
    std::vector<char> interferer_set; // per tier: explicit interferer_fading?
};

void handle_top(ParseState& st, const Cursor& at, const std::string& key,
                const std::string& value)
{
    if (key == "variable")
        st.spec.variable = parse_variable(at, value);
    else if (key == "grid")
        st.spec.grid = parse_grid(at, value);
    else if (key == "engines")
        st.spec.engines = parse_engines(at, value);
    else if (key == "seed")
        st.spec.seed = parse_seed(at, "seed", value);
    else if (key == "trials") {
        st.spec.trials = parse_int(at, "trials", value);
        if (st.spec.trials < 1)
            fail(at, "trials: must be at least 1");
    } else if (key == "tol") {
        st.spec.tol = parse_num(at, "tol", value);
    } else {
        fail(at, "unknown key '" + key +
                     "' (expected variable, grid, engines, seed, trials, tol)");
    }
}

void handle_network(ParseState& st, const Cursor& at, const std::string& key,
                    const std::string& value)
{
    if (key == "path_loss") {
        st.spec.base.path_loss = parse_path_loss(at, value);
    } else if (key == "noise") {
        const double v = parse_num(at, "noise", value);
        if (v < 0.0)
            fail(at, "noise: must be non-negative");
        st.spec.base.noise = v;
    } else if (key == "association") {
        st.spec.base.association = parse_association(at, value);
    } else {
        fail(at, "unknown key '" + key +
                     "' (expected path_loss, noise, association)");
    }
}

void handle_tier(ParseState& st, std::size_t index, const Cursor& at,
                 const std::string& key, const std::string& value)
{
    Tier& tier = st.spec.base.tiers[index];
    if (key == "density")
        tier.density = parse_num(at, "density", value);
    else if (key == "power")
        tier.power = parse_num(at, "power", value);
    else if (key == "threshold")
        tier.threshold = parse_num(at, "threshold", value);
    else if (key == "fading")
        tier.fading = parse_fading_field(at, "fading", value);
    else if (key == "interferer_fading") {
        tier.interferer_fading = parse_fading_field(at, "interferer_fading", value);
        st.interferer_set[index] = 1;
    } else if (key == "antennas") {
        const long n = parse_int(at, "antennas", value);
        if (n < 1)
            fail(at, "antennas: must be at least 1");
        tier.antennas = static_cast<int>(n);
    } else if (key == "miso_gain") {
        tier.miso_gain = parse_miso_gain(at, value);
    } else {
        fail(at, "unknown key '" + key +
                     "' (expected density, power, threshold, fading, "
                     "interferer_fading, antennas, miso_gain)");
    }
}

Tier default_tier()
{
    Tier t;
    t.fading = make_gamma(1.0);
    t.interferer_fading = t.fading;
    return t;
}

void apply_override(ParseState& st, const std::string& item)
{
    const Cursor at{"--set " + item, 0};
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
        fail(at, "expected key=value");
    const std::string path = lower(trim(item.substr(0, eq)));
    const std::string value = trim(item.substr(eq + 1));
    if (value.empty())
        fail(at, "empty value for '" + path + "'");

    if (path.rfind("network.", 0) == 0) {
        handle_network(st, at, path.substr(8), value);
        return;
    }
    if (path.rfind("tier", 0) == 0 && path.find('.') != std::string::npos) {
        const auto dot = path.find('.');
        const std::string idx = path.substr(4, dot - 4);
        const long n = parse_int(at, "tier index", idx);
        if (n < 0 || static_cast<std::size_t>(n) >= st.spec.base.tiers.size())
            fail(at, "tier index " + idx + " out of range (" +
                         std::to_string(st.spec.base.tiers.size()) +
                         " tiers defined)");
        const std::string key = path.substr(dot + 1);
        handle_tier(st, static_cast<std::size_t>(n), at, key, value);
        if (key == "fading" && !st.interferer_set[static_cast<std::size_t>(n)])
            st.spec.base.tiers[static_cast<std::size_t>(n)].interferer_fading =
                st.spec.base.tiers[static_cast<std::size_t>(n)].fading;
        return;
    }
    handle_top(st, at, path, value);
}

// ---------------------------------------------------------------------------
// Engine preconditions.

const char* engine_requirement(SweepEngine engine)
{
    switch (engine) {
    case SweepEngine::Closest:
        return "needs closest association and unbounded or bounded path loss";
    case SweepEngine::Strongest:
        return "needs strongest association and unbounded path loss";
    case SweepEngine::AdHoc:
        return "needs fixed-distance association and unbounded path loss";
    case SweepEngine::MisoBounded:
        return "needs closest association and bounded path loss";
    case SweepEngine::MmWave:
        return "needs closest association and the mmwave path-loss variant";
    case SweepEngine::ThreeD:
        return "needs closest association and the threed path-loss variant";
    case SweepEngine::Simulate:
        return "applies to every network";
    }
    return "";
}

// ---------------------------------------------------------------------------
// Row dispatch and CSV plumbing.

struct RowResult {
    double coverage = 0.0;
    double residual = 0.0;
    long trials = -1; // >= 0 on Monte Carlo rows only
};

RowResult dispatch_engine(SweepEngine engine, const NetworkModel& net, double tol,
                          long trials, std::uint64_t seed)
{
    RowResult row;
    switch (engine) {
    case SweepEngine::Closest: {
        const CoverageEstimate est = coverage_closest(net, tol);
        row.coverage = est.value;
        row.residual = est.residual;
        break;
    }
    case SweepEngine::Strongest: {
        const CoverageEstimate est = coverage_strongest(net);
        row.coverage = est.value;
        row.residual = est.residual;
        break;
    }
    case SweepEngine::AdHoc: {
        const CoverageEstimate est = coverage_adhoc(net, tol);
        row.coverage = est.value;
        row.residual = est.residual;
        break;
    }
    case SweepEngine::MisoBounded: {
        const auto* bd = std::get_if<Bounded>(&net.path_loss);
        if (!bd)
            throw NotApplicable("miso_bounded engine needs the bounded "
                                "path-loss variant");
        const Tier& t0 = net.tiers.at(0);
        row.coverage =
            miso_bounded_approx(t0.density, t0.antennas, t0.threshold, bd->alpha);
        break;
    }
    case SweepEngine::MmWave: {
        const Tier& t0 = net.tiers.at(0);
        row.coverage = mmwave_approx(t0.density, t0.antennas, net);
        break;
    }
    case SweepEngine::ThreeD: {
        const Tier& t0 = net.tiers.at(0);
        row.coverage = threed_approx(t0.density, t0.antennas, net);
        break;
    }
    case SweepEngine::Simulate: {
        const McEstimate est = estimate_coverage(net, trials, seed);
        row.coverage = est.value;
        row.residual = est.half_width;
        row.trials = est.trials;
        break;
    }
    }
    return row;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        if (c == '\n')
            c = ' ';
        out += c;
    }
    out += '"';
    return out;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

void write_sweep_row(std::ostream& out, const char* variable, double value,
                     const char* engine, const RowResult* row,
                     const std::string& error, double seconds)
{
    out << variable << ',' << csv_number(value) << ',' << engine << ',';
    if (row) {
        out << csv_number(row->coverage) << ',' << csv_number(row->residual) << ',';
        if (row->trials >= 0)
            out << row->trials;
    } else {
        out << ",,";
    }
    out << ',' << csv_number(seconds) << ',' << csv_escape(error) << '\n';
}

// ---------------------------------------------------------------------------
// Figure recipes.

std::vector<double> logspace(double first, double last, int n)
{
    std::vector<double> out(static_cast<std::size_t>(n));
    const double la = std::log(first), lb = std::log(last);
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            std::exp(la + (lb - la) * i / static_cast<double>(n - 1));
    out.front() = first;
    out.back() = last;
    return out;
}

int rice_terms(double k_factor)
{
    // Series length covering the Poisson weights to far below the mixture's
    // 1e-12 tail requirement.
    return std::max(64, static_cast<int>(std::ceil(k_factor + 12.0 * std::sqrt(
                                                                       k_factor) +
                                                   32.0)));
}

struct FigCurve {
    std::string label;
    SweepEngine engine = SweepEngine::Closest; // paired analytic engine
    bool dense_overlay = false; // dense-network limit instead of an engine
    bool simulate = true;
    std::function<NetworkModel(double)> net_at;
};

struct FigureDef {
    SweepVariable variable = SweepVariable::Lambda;
    std::vector<double> grid;
    std::vector<FigCurve> curves;
};

Tier fig_tier(double density, double power, double threshold, const FadingModel& f)
{
    Tier t;
    t.density = density;
    t.power = power;
    t.threshold = threshold;
    t.fading = f;
    t.interferer_fading = f;
    return t;
}

// Two unequal-power tiers with shape-1.5 and shape-2.5 gamma fading.
NetworkModel two_tier_net(double beta, const Association& assoc,
                          const PathLoss& loss)
{
    NetworkModel net;
    net.noise = 1e-10;
    net.path_loss = loss;
    net.association = assoc;
    net.tiers = {fig_tier(1e-4, 50.0, beta, make_gamma(1.5)),
                 fig_tier(1e-4, 1.0, beta, make_gamma(2.5))};
    return net;
}

FigCurve lambda_curve(std::string label, SweepEngine engine, NetworkModel base)
{
    FigCurve c;
    c.label = std::move(label);
    c.engine = engine;
    c.net_at = [base = std::move(base)](double v) {
        return apply_variable(base, SweepVariable::Lambda, v);
    };
    return c;
}

FigureDef figure_def(int n)
{
    FigureDef fig;
    switch (n) {
    case 1: {
        // Two-tier comparison of the association rules at two thresholds.
        fig.grid = logspace(1e-5, 1e-3, 7);
        const double beta5 = std::pow(10.0, 0.5);
        fig.curves = {
            lambda_curve("closest-0dB", SweepEngine::Closest,
                         two_tier_net(1.0, ClosestBS{}, Unbounded{3.0})),
            lambda_curve("closest-5dB", SweepEngine::Closest,
                         two_tier_net(beta5, ClosestBS{}, Unbounded{3.0})),
            lambda_curve("strongest-0dB", SweepEngine::Strongest,
                         two_tier_net(1.0, StrongestBS{}, Unbounded{3.0})),
            lambda_curve("strongest-5dB", SweepEngine::Strongest,
                         two_tier_net(beta5, StrongestBS{}, Unbounded{3.0})),
        };
        break;
    }
    case 2: {
        // Bounded vs unbounded path loss under densification, with the
        // dense-network limits overlaid.  The grid stops where the bounded
        // contour quadrature still converges at these tier parameters; the
        // downward bend is already unambiguous by then.
        fig.grid = logspace(1e-5, 3e-2, 7);
        FigCurve ul = lambda_curve("unbounded-limit", SweepEngine::Closest,
                                   two_tier_net(1.0, ClosestBS{}, Unbounded{3.0}));
        ul.dense_overlay = true;
        ul.simulate = false;
        FigCurve bl = lambda_curve("bounded-limit", SweepEngine::Closest,
                                   two_tier_net(1.0, ClosestBS{}, Bounded{3.0}));
        bl.dense_overlay = true;
        bl.simulate = false;
        fig.curves = {
            lambda_curve("unbounded", SweepEngine::Closest,
                         two_tier_net(1.0, ClosestBS{}, Unbounded{3.0})),
            lambda_curve("bounded", SweepEngine::Closest,
                         two_tier_net(1.0, ClosestBS{}, Bounded{3.0})),
            std::move(ul),
            std::move(bl),
        };
        break;
    }
    case 3: {
        // Fixed-distance link under densification for the fading catalog.
        fig.grid = logspace(1e-3, 1.0, 7);
        const std::pair<const char*, FadingModel> models[] = {
            {"rayleigh", make_gamma(1.0)},
            {"nakagami-m2", make_gamma(2.0)},
            {"gengamma", make_gen_gamma(2.0, 1.5)},
            {"rice-k5", make_rice(5.0)},
            {"lognormal", make_lognormal(0.0, 0.25)},
            {"fisher", make_fisher(2.0, 3.0)},
        };
        for (const auto& [label, model] : models) {
            NetworkModel net;
            net.noise = 1e-10;
            net.path_loss = Unbounded{3.0};
            net.association = FixedDistance{1.0};
            net.tiers = {fig_tier(1e-3, 1.0, 1.0, model)};
            fig.curves.push_back(lambda_curve(label, SweepEngine::AdHoc, net));
        }
        break;
    }
    case 4: {
        // Multi-antenna serving gain vs antenna count on the bounded model
        // (outage in the usual presentation is 1 - coverage).
        fig.variable = SweepVariable::Antennas;
        fig.grid = {1, 2, 3, 4, 5, 6, 7, 8};
        NetworkModel net;
        net.noise = 1e-10;
        net.path_loss = Bounded{3.0};
        net.association = ClosestBS{};
        net.tiers = {fig_tier(1e-3, 1.0, 1.0, make_gamma(1.0))};
        net.tiers[0].miso_gain = GammaGain{1.0, 1.0};
        FigCurve c;
        c.label = "mrt";
        c.engine = SweepEngine::MisoBounded;
        c.net_at = [net](double v) {
            return apply_variable(net, SweepVariable::Antennas, v);
        };
        fig.curves = {std::move(c)};
        break;
    }
    case 5: {
        // Strongest-transmitter coverage vs the first tier's Rice factor.
        // The tiers carry distinct thresholds: with symmetric parameters the
        // factor cancels out of the coverage ratio entirely (the flat
        // common-k curve), so only tier asymmetry moves coverage.
        fig.variable = SweepVariable::RiceFactor;
        fig.grid = {0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
        NetworkModel base;
        base.noise = 1e-10;
        base.path_loss = Unbounded{3.0};
        base.association = StrongestBS{};
        base.tiers = {fig_tier(1e-3, 1.0, 1.0, make_rice(1.0)),
                      fig_tier(1e-3, 1.0, std::pow(10.0, 0.5), make_rice(3.0))};
        FigCurve sweep1;
        sweep1.label = "tier1-sweep";
        sweep1.engine = SweepEngine::Strongest;
        sweep1.net_at = [base](double v) {
            return apply_variable(base, SweepVariable::RiceFactor, v);
        };
        FigCurve common;
        common.label = "common-k";
        common.engine = SweepEngine::Strongest;
        common.net_at = [base](double v) {
            NetworkModel net = base;
            const FadingModel f = make_rice(v, rice_terms(v));
            for (Tier& t : net.tiers) {
                t.fading = f;
                t.interferer_fading = f;
            }
            return net;
        };
        fig.curves = {std::move(sweep1), std::move(common)};
        break;
    }
    case 6: {
        // Fixed-distance multi-antenna link with the antenna count scaled
        // against density: sub-linear, linear and super-linear exponents.
        fig.grid = logspace(0.1, 100.0, 7);
        NetworkModel base;
        base.noise = 1e-10;
        base.path_loss = Unbounded{3.0};
        base.association = FixedDistance{0.5};
        base.tiers = {fig_tier(0.1, 1.0, 1.0, make_gamma(1.0))};
        const std::pair<const char*, double> scalings[] = {
            {"superlinear", 1.5},
            {"linear", 1.0},
            {"sublinear", 0.5},
            {"constant", 0.0},
        };
        for (const auto& [label, p] : scalings) {
            FigCurve c;
            c.label = label;
            c.engine = SweepEngine::AdHoc;
            c.net_at = [base, p = p](double v) {
                NetworkModel net = apply_variable(base, SweepVariable::Lambda, v);
                const double n = std::max(1.0, std::ceil(std::pow(v, p)));
                net.tiers[0].antennas = static_cast<int>(n);
                net.tiers[0].miso_gain = GammaGain{n, 1.0};
                return net;
            };
            fig.curves.push_back(std::move(c));
        }
        break;
    }
    case 7: {
        // Elevated deployment: coverage vs height for several antenna counts.
        fig.variable = SweepVariable::Height;
        fig.grid = {0.1, 0.2, 0.4, 0.8, 1.6};
        NetworkModel base;
        base.noise = 1e-10;
        base.path_loss = ThreeD{3.0, 0.1};
        base.association = ClosestBS{};
        base.tiers = {fig_tier(4.0, 1.0, 1.0, make_gamma(1.0))};
        for (int n_t : {1, 2, 4, 8}) {
            FigCurve c;
            c.label = "nt-" + std::to_string(n_t);
            c.engine = SweepEngine::ThreeD;
            c.net_at = [base, n_t](double v) {
                NetworkModel net = apply_variable(base, SweepVariable::Height, v);
                net.tiers[0].antennas = n_t;
                net.tiers[0].miso_gain = GammaGain{static_cast<double>(n_t), 1.0};
                return net;
            };
            fig.curves.push_back(std::move(c));
        }
        break;
    }
    default:
        throw BadParameter("figure number must lie in 1..7, got " +
                           std::to_string(n));
    }
    return fig;
}

int write_figure(const FigureDef& fig, std::ostream& out, long trials,
                 std::uint64_t seed)
{
    out << "curve,variable,value,engine,analytic,residual,simulated,"
           "ci_half_width,trials,seconds,error\n";
    int errors = 0;
    const char* var = variable_name(fig.variable);
    for (std::size_t i = 0; i < fig.grid.size(); ++i) {
        const double v = fig.grid[i];
        for (const FigCurve& curve : fig.curves) {
            const auto start = std::chrono::steady_clock::now();
            out << csv_escape(curve.label) << ',' << var << ',' << csv_number(v)
                << ',';
            try {
                const NetworkModel net = curve.net_at(v);
                double analytic, residual = 0.0;
                const char* ename;
                if (curve.dense_overlay) {
                    analytic = dense_limit(net, v, 1e-6);
                    ename = "dense_limit";
                } else {
                    const RowResult row =
                        dispatch_engine(curve.engine, net, 1e-6, 0, 0);
                    analytic = row.coverage;
                    residual = row.residual;
                    ename = engine_name(curve.engine);
                }
                std::string sim, ci, ntrials;
                if (curve.simulate) {
                    const McEstimate mc = estimate_coverage(net, trials, seed + i);
                    sim = csv_number(mc.value);
                    ci = csv_number(mc.half_width);
                    ntrials = std::to_string(mc.trials);
                }
                out << ename << ',' << csv_number(analytic) << ','
                    << csv_number(residual) << ',' << sim << ',' << ci << ','
                    << ntrials << ',' << csv_number(seconds_since(start)) << ",\n";
            } catch (const std::exception& ex) {
                ++errors;
                out << ",,,,,," << csv_number(seconds_since(start)) << ','
                    << csv_escape(ex.what()) << '\n';
            }
        }
    }
    return errors;
}

// ---------------------------------------------------------------------------
// Identity kernels for the selftest.

FoxHParams exp_kernel()
{
    FoxHParams P;
    P.lower = {{0.0, 1.0}};
    P.u = 1;
    return P;
}

FoxHParams step_kernel()
{
    FoxHParams P;
    P.upper = {{1.0, 1.0}};
    P.lower = {{0.0, 1.0}};
    P.u = 1;
    P.v = 0;
    return P;
}

FoxHParams gamma_tail_kernel(double n)
{
    FoxHParams P;
    P.upper = {{1.0, 1.0}};
    P.lower = {{0.0, 1.0}, {n, 1.0}};
    P.u = 2;
    P.v = 0;
    return P;
}

FoxHParams erfc_kernel()
{
    FoxHParams P;
    P.upper = {{1.0, 0.5}};
    P.lower = {{0.0, 1.0}};
    P.u = 1;
    P.v = 0;
    return P;
}

// Regularized upper incomplete gamma for integer n: e^{-x} sum x^k / k!.
double gamma_q_int(int n, double x)
{
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < n; ++k) {
        term *= x / k;
        sum += term;
    }
    return std::exp(-x) * sum;
}

} // namespace

// ---------------------------------------------------------------------------
// Public surface.

const char* variable_name(SweepVariable variable)
{
    for (const auto& row : kVariables)
        if (row.variable == variable)
            return row.name;
    return "?";
}

const char* engine_name(SweepEngine engine)
{
    for (const auto& row : kEngines)
        if (row.engine == engine)
            return row.name;
    return "?";
}

bool engine_supports(SweepEngine engine, const NetworkModel& net)
{
    const bool closest = std::holds_alternative<ClosestBS>(net.association);
    const bool strongest = std::holds_alternative<StrongestBS>(net.association);
    const bool fixed = std::holds_alternative<FixedDistance>(net.association);
    const bool unbounded = std::holds_alternative<Unbounded>(net.path_loss);
    const bool bounded = std::holds_alternative<Bounded>(net.path_loss);
    switch (engine) {
    case SweepEngine::Closest:
        return closest && (unbounded || bounded);
    case SweepEngine::Strongest:
        return strongest && unbounded;
    case SweepEngine::AdHoc:
        return fixed && unbounded;
    case SweepEngine::MisoBounded:
        return closest && bounded;
    case SweepEngine::MmWave:
        return closest && std::holds_alternative<MmWave>(net.path_loss);
    case SweepEngine::ThreeD:
        return closest && std::holds_alternative<ThreeD>(net.path_loss);
    case SweepEngine::Simulate:
        return true;
    }
    return false;
}

SweepSpec parse_sweep(std::string_view text, std::string_view origin,
                      const std::vector<std::string>& overrides)
{
    ParseState st;
    Cursor at{std::string(origin), 0};
    enum class Section { Top, Network, TierSec } section = Section::Top;

    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string line(text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        at.line = ++line_no;

        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (line.empty())
            continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                fail(at, "missing ']' in section header '" + line + "'");
            const std::string name = lower(trim(line.substr(1, line.size() - 2)));
            if (name == "network") {
                section = Section::Network;
            } else if (name == "tier") {
                st.spec.base.tiers.push_back(default_tier());
                st.interferer_set.push_back(0);
                section = Section::TierSec;
            } else {
                fail(at, "unknown section [" + name +
                             "] (expected [network] or [tier])");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(at, "expected 'key = value', got '" + line + "'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(at, "missing key before '='");
        if (value.empty())
            fail(at, "empty value for '" + key + "'");

        switch (section) {
        case Section::Top:
            handle_top(st, at, key, value);
            break;
        case Section::Network:
            handle_network(st, at, key, value);
            break;
        case Section::TierSec:
            handle_tier(st, st.spec.base.tiers.size() - 1, at, key, value);
            break;
        }
    }

    for (const std::string& item : overrides)
        apply_override(st, item);

    for (std::size_t i = 0; i < st.spec.base.tiers.size(); ++i)
        if (!st.interferer_set[i])
            st.spec.base.tiers[i].interferer_fading = st.spec.base.tiers[i].fading;
    return st.spec;
}

SweepSpec parse_sweep_file(const std::string& path,
                           const std::vector<std::string>& overrides)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sweep(buf.str(), path, overrides);
}

void validate_sweep(const SweepSpec& spec)
{
    const auto bad = [](const std::string& msg) -> void {
        throw ConfigError("sweep: " + msg);
    };
    if (spec.base.tiers.empty())
        bad("network defines no tiers (add a [tier] section)");
    try {
        validate(spec.base);
    } catch (const Error& e) {
        bad(std::string("network: ") + e.what());
    }

    if (spec.grid.empty())
        bad("grid must be non-empty");
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (!(spec.grid[i] > spec.grid[i - 1]))
            bad("grid must be strictly increasing");
    double lo = 0.0;
    bool inclusive = false;
    switch (spec.variable) {
    case SweepVariable::Lambda:
    case SweepVariable::Beta:
    case SweepVariable::Height:
        break; // strictly positive
    case SweepVariable::Antennas:
        lo = 1.0;
        inclusive = true;
        break;
    case SweepVariable::RiceFactor:
    case SweepVariable::Blockage:
        inclusive = true;
        break;
    }
    for (double v : spec.grid)
        if (!std::isfinite(v) || (inclusive ? v < lo : v <= lo))
            bad(std::string("grid value ") + csv_number(v) + " outside the " +
                variable_name(spec.variable) + " domain");
    if (spec.variable == SweepVariable::Height &&
        !std::holds_alternative<ThreeD>(spec.base.path_loss))
        bad("variable h needs the threed path-loss variant");
    if (spec.variable == SweepVariable::Blockage &&
        !std::holds_alternative<MmWave>(spec.base.path_loss))
        bad("variable tau needs the mmwave path-loss variant");

    if (spec.engines.empty())
        bad("engines must be non-empty");
    for (std::size_t i = 0; i < spec.engines.size(); ++i)
        for (std::size_t j = i + 1; j < spec.engines.size(); ++j)
            if (spec.engines[i] == spec.engines[j])
                bad(std::string("duplicate engine '") +
                    engine_name(spec.engines[i]) + "'");
    for (SweepEngine e : spec.engines)
        if (!engine_supports(e, spec.base))
            bad(std::string("engine ") + engine_name(e) + " " +
                engine_requirement(e));

    const bool simulates =
        std::find(spec.engines.begin(), spec.engines.end(),
                  SweepEngine::Simulate) != spec.engines.end();
    if (simulates && spec.trials < 1000)
        bad("simulate needs at least 1000 trials");
    if (!(spec.tol > 0.0) || !(spec.tol < 1.0))
        bad("tol must lie in (0, 1)");
}

NetworkModel apply_variable(const NetworkModel& base, SweepVariable variable,
                            double value)
{
    if (base.tiers.empty())
        throw BadParameter("network defines no tiers");
    NetworkModel net = base;
    switch (variable) {
    case SweepVariable::Lambda:
        for (Tier& t : net.tiers)
            t.density = value;
        break;
    case SweepVariable::Beta:
        for (Tier& t : net.tiers)
            t.threshold = value;
        break;
    case SweepVariable::Antennas: {
        const int n = std::max(1, static_cast<int>(std::lround(value)));
        for (Tier& t : net.tiers) {
            t.antennas = n;
            if (t.miso_gain)
                t.miso_gain->shape = value;
        }
        break;
    }
    case SweepVariable::Height: {
        auto* td = std::get_if<ThreeD>(&net.path_loss);
        if (!td)
            throw NotApplicable("height sweep needs the threed path-loss variant");
        td->height = value;
        break;
    }
    case SweepVariable::RiceFactor: {
        const FadingModel f = make_rice(value, rice_terms(value));
        net.tiers[0].fading = f;
        net.tiers[0].interferer_fading = f;
        break;
    }
    case SweepVariable::Blockage: {
        auto* mw = std::get_if<MmWave>(&net.path_loss);
        if (!mw)
            throw NotApplicable("blockage sweep needs the mmwave path-loss "
                                "variant");
        mw->blockage = value;
        break;
    }
    }
    return net;
}

double variable_value(const NetworkModel& net, SweepVariable variable)
{
    if (net.tiers.empty())
        throw BadParameter("network defines no tiers");
    switch (variable) {
    case SweepVariable::Lambda:
        return net.tiers[0].density;
    case SweepVariable::Beta:
        return net.tiers[0].threshold;
    case SweepVariable::Antennas:
        return net.tiers[0].miso_gain ? net.tiers[0].miso_gain->shape
                                      : static_cast<double>(net.tiers[0].antennas);
    case SweepVariable::Height: {
        const auto* td = std::get_if<ThreeD>(&net.path_loss);
        if (!td)
            throw NotApplicable("network has no height (threed variant required)");
        return td->height;
    }
    case SweepVariable::RiceFactor:
        if (net.tiers[0].fading.kind != FadingKind::Rice)
            throw NotApplicable("first tier's fading is not a Rice model");
        return net.tiers[0].fading.k_factor;
    case SweepVariable::Blockage: {
        const auto* mw = std::get_if<MmWave>(&net.path_loss);
        if (!mw)
            throw NotApplicable("network has no blockage rate (mmwave variant "
                                "required)");
        return mw->blockage;
    }
    }
    throw BadParameter("unknown sweep variable");
}

int run_sweep(const SweepSpec& spec, std::ostream& out)
{
    validate_sweep(spec);
    out << "variable,value,engine,coverage,residual_or_ci,trials,seconds,error\n";
    int errors = 0;
    const char* var = variable_name(spec.variable);
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        const double v = spec.grid[i];
        for (SweepEngine engine : spec.engines) {
            const auto start = std::chrono::steady_clock::now();
            try {
                const NetworkModel net = apply_variable(spec.base, spec.variable, v);
                const RowResult row = dispatch_engine(engine, net, spec.tol,
                                                      spec.trials, spec.seed + i);
                write_sweep_row(out, var, v, engine_name(engine), &row, "",
                                seconds_since(start));
            } catch (const std::exception& ex) {
                ++errors;
                write_sweep_row(out, var, v, engine_name(engine), nullptr,
                                ex.what(), seconds_since(start));
            }
        }
    }
    return errors;
}

int reproduce_figure(int n, const std::string& out_dir, long trials,
                     std::uint64_t seed)
{
    const FigureDef fig = figure_def(n); // validates n before touching the disk
    std::filesystem::create_directories(out_dir);
    const std::string path =
        (std::filesystem::path(out_dir) / ("fig" + std::to_string(n) + ".csv"))
            .string();
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError(path + ": cannot open output file");
    return write_figure(fig, out, trials, seed);
}

int run_selftest(std::ostream& out)
{
    struct Check {
        const char* name;
        double max_err = 0.0;
        double tol = 0.0;
    };
    std::vector<Check> checks;

    {
        Check c{"exponential kernel vs exp(-x)", 0.0, 1e-10};
        const FoxHParams P = exp_kernel();
        for (double x : {0.0, 1e-3, 0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0,
                         16.0, 20.0})
            c.max_err = std::max(c.max_err,
                                 std::abs(eval(P, x, 1e-12) - std::exp(-x)));
        checks.push_back(c);
    }
    {
        Check c{"ratio kernel vs unit step", 0.0, 1e-12};
        const FoxHParams P = step_kernel();
        for (double z : {0.125, 0.5, 0.9, 0.995, 1.005, 1.5, 3.0, 8.0}) {
            const double want = z < 1.0 ? 1.0 : 0.0;
            c.max_err = std::max(c.max_err, std::abs(eval(P, z, 1e-13) - want));
        }
        checks.push_back(c);
    }
    {
        Check c{"tail kernel vs regularized gamma Q", 0.0, 1e-8};
        for (int n : {1, 2, 3, 5}) {
            const FoxHParams P = gamma_tail_kernel(n);
            const double norm = std::tgamma(static_cast<double>(n));
            for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0})
                c.max_err = std::max(c.max_err, std::abs(eval(P, x, 1e-10) / norm -
                                                         gamma_q_int(n, x)));
        }
        checks.push_back(c);
    }
    {
        Check c{"half-order kernel vs erfc(z/2)", 0.0, 1e-10};
        const FoxHParams P = erfc_kernel();
        for (double z : {0.1, 0.5, 1.0, 2.0, 4.0})
            c.max_err =
                std::max(c.max_err, std::abs(eval(P, z, 1e-12) - std::erfc(z / 2.0)));
        checks.push_back(c);
    }

    int failures = 0;
    for (const Check& c : checks) {
        const bool ok = c.max_err <= c.tol;
        failures += ok ? 0 : 1;
        char line[160];
        std::snprintf(line, sizeof line, "[%s] %-38s max error %.3e (tol %.0e)\n",
                      ok ? "PASS" : "FAIL", c.name, c.max_err, c.tol);
        out << line;
    }
    return failures;
}

std::string csv_number(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace udn
