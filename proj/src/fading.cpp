// SPDX-License-Identifier: Apache-2.0

#include "udn/fading.hpp"
#include "udn/quadrature.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace udn {

namespace {

constexpr double kLn10 = 2.302585092994045684;

// Kernel of the unit-rate gamma density with shape parameter `shape`,
// argument-scaled by `rate`: f(g) = (rate/Gamma(shape)) (rate g)^{shape-1}
// exp(-rate g).
FoxHParams gamma_density_kernel(double shape, double rate)
{
    FoxHParams P;
    P.kappa = rate / std::tgamma(shape);
    P.c = rate;
    P.lower = {{shape - 1.0, 1.0}};
    P.u = 1;
    return P;
}

} // namespace

FadingModel make_gamma(double m)
{
    if (!(m > 0.0) || !std::isfinite(m))
        throw BadParameter("gamma fading: field 'm' must be a positive shape, got " +
                           std::to_string(m));
    FadingModel f;
    f.kind = FadingKind::Gamma;
    f.m = m;
    f.mixture = {{1.0, std::nullopt, gamma_density_kernel(m, m)}};
    f.mean = 1.0;
    return f;
}

FadingModel make_gen_gamma(double m, double eta)
{
    if (!(m > 0.0) || !std::isfinite(m))
        throw BadParameter("gengamma fading: field 'm' must be positive, got " +
                           std::to_string(m));
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw BadParameter("gengamma fading: field 'eta' must be positive, got " +
                           std::to_string(eta));
    FadingModel f;
    f.kind = FadingKind::GenGamma;
    f.m = m;
    f.eta = eta;
    // g = G^{1/eta} / mu_g with G ~ Gamma(m, 1) has unit mean for
    // mu_g = Gamma(m + 1/eta) / Gamma(m); its density is the single-factor
    // kernel (m - 1/eta, 1/eta) at argument mu_g * g.
    const double mu_g = std::exp(std::lgamma(m + 1.0 / eta) - std::lgamma(m));
    FoxHParams P;
    P.kappa = mu_g / std::tgamma(m);
    P.c = mu_g;
    P.lower = {{m - 1.0 / eta, 1.0 / eta}};
    P.u = 1;
    f.mixture = {{1.0, std::nullopt, P}};
    f.mean = 1.0;
    return f;
}

FadingModel make_rice(double k_factor, int max_terms)
{
    if (!(k_factor >= 0.0) || !std::isfinite(k_factor))
        throw BadParameter("rice fading: field 'k' must be >= 0, got " +
                           std::to_string(k_factor));
    if (max_terms < 1)
        throw BadParameter("rice fading: field 'terms' must be >= 1");
    FadingModel f;
    f.kind = FadingKind::Rice;
    f.k_factor = k_factor;
    f.max_terms = max_terms;

    // Poisson(K)-weighted unit-rate gamma mixture: term t has shape t + 1
    // and mean (t + 1)/(1 + K), so every kernel shares rate 1 + K.
    const double rate = 1.0 + k_factor;
    double weight = std::exp(-k_factor); // Psi_0
    double cum = 0.0;
    for (int t = 0; t < max_terms; ++t) {
        f.mixture.push_back({weight, std::nullopt, gamma_density_kernel(t + 1.0, rate)});
        cum += weight;
        if (1.0 - cum < 1e-12)
            break;
        weight *= k_factor / (t + 1.0);
    }
    if (1.0 - cum >= 1e-12)
        throw TruncationOverflow("rice fading: K = " + std::to_string(k_factor) +
                                 " needs more than " + std::to_string(max_terms) +
                                 " Poisson terms for tail mass < 1e-12");
    for (auto& term : f.mixture)
        term.weight /= cum;
    f.mean = 1.0;
    return f;
}

FadingModel make_lognormal(double mu, double sigma, int hermite_order)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw BadParameter("lognormal fading: field 'sigma' must be positive, got " +
                           std::to_string(sigma));
    if (!std::isfinite(mu))
        throw BadParameter("lognormal fading: field 'mu' must be finite");
    if (hermite_order < 1 || hermite_order > 256)
        throw BadParameter("lognormal fading: field 'n' must lie in [1, 256]");
    FadingModel f;
    f.kind = FadingKind::Lognormal;
    f.mu = mu;
    f.sigma = sigma;
    f.hermite_order = hermite_order;

    // Gauss-Hermite point masses at 10^{mu + sqrt(2) sigma u_n}; the raw
    // weights sum to sqrt(pi), normalized here to exact unit mass.
    const GaussRule& rule = gauss_hermite(hermite_order);
    double total = 0.0;
    for (double w : rule.weights)
        total += w;
    for (int n = 0; n < hermite_order; ++n) {
        const double loc = std::pow(10.0, mu + std::sqrt(2.0) * sigma * rule.nodes[n]);
        f.mixture.push_back({rule.weights[n] / total, loc, FoxHParams{}});
    }
    const double mu_n = mu * kLn10, sigma_n = sigma * kLn10;
    f.mean = std::exp(mu_n + 0.5 * sigma_n * sigma_n);
    return f;
}

FadingModel make_fisher(double m, double m_s)
{
    if (!(m > 0.0) || !std::isfinite(m))
        throw BadParameter("fisherf fading: field 'm' must be positive, got " +
                           std::to_string(m));
    if (!(m_s > 1.0) || !std::isfinite(m_s))
        throw BadParameter("fisherf fading: field 'ms' must exceed 1 (finite mean), got " +
                           std::to_string(m_s));
    FadingModel f;
    f.kind = FadingKind::FisherF;
    f.m = m;
    f.m_s = m_s;
    // chi(s) = Gamma(m - 1 + s) Gamma(1 + m_s - s), argument scale m/m_s:
    // the Fisher-Snedecor power density with E[g] = m_s / (m_s - 1).
    FoxHParams P;
    P.kappa = m / (m_s * std::tgamma(m) * std::tgamma(m_s));
    P.c = m / m_s;
    P.upper = {{-m_s, 1.0}};
    P.lower = {{m - 1.0, 1.0}};
    P.u = 1;
    P.v = 1;
    f.mixture = {{1.0, std::nullopt, P}};
    f.mean = m_s / (m_s - 1.0);
    return f;
}

FadingModel make_custom(const FoxHParams& kernel)
{
    validate(kernel);
    FadingModel f;
    f.kind = FadingKind::CustomH;
    f.mixture = {{1.0, std::nullopt, kernel}};
    const double mass = mellin_moment(kernel, 0.0);
    if (std::abs(mass - 1.0) > 1e-6)
        throw BadParameter("custom kernel is not a probability density: mass = " +
                           std::to_string(mass));
    try {
        f.mean = mellin_moment(kernel, 1.0);
    } catch (const StripViolation&) {
        f.mean = std::numeric_limits<double>::quiet_NaN();
    }
    return f;
}

double pdf(const FadingModel& model, double x, bool* analytic_fallback)
{
    if (!(x >= 0.0) || !std::isfinite(x))
        throw BadParameter("pdf argument must be finite and non-negative");
    if (analytic_fallback)
        *analytic_fallback = false;

    const bool has_atoms =
        std::any_of(model.mixture.begin(), model.mixture.end(),
                    [](const MixtureTerm& t) { return t.atom.has_value(); });
    if (has_atoms) {
        // Point-mass mixtures have no kernel density; fall back to the exact
        // lognormal density these atoms discretize.
        if (model.kind != FadingKind::Lognormal)
            throw NotApplicable("density undefined for a point-mass mixture");
        if (analytic_fallback)
            *analytic_fallback = true;
        if (x == 0.0)
            return 0.0;
        const double mu_n = model.mu * kLn10, sigma_n = model.sigma * kLn10;
        const double z = (std::log(x) - mu_n) / sigma_n;
        return std::exp(-0.5 * z * z) / (x * sigma_n * std::sqrt(2.0 * std::numbers::pi));
    }

    double density = 0.0;
    for (const auto& term : model.mixture)
        density += term.weight * term.kernel.kappa *
                   eval(term.kernel, term.kernel.c * x, 1e-10);
    return density;
}

double lambda_moment(const FadingModel& model, double delta)
{
    if (!(delta > 0.0) || !(delta < 1.0))
        throw BadParameter("moment order must lie in (0, 1), got " + std::to_string(delta));
    double moment = 0.0;
    for (const auto& term : model.mixture) {
        if (term.atom)
            moment += term.weight * std::pow(*term.atom, delta);
        else
            moment += term.weight * mellin_moment(term.kernel, delta);
    }
    return moment;
}

std::optional<double> lambda_moment_table(const FadingModel& model, double delta)
{
    if (!(delta > 0.0) || !(delta < 1.0))
        throw BadParameter("moment order must lie in (0, 1), got " + std::to_string(delta));
    switch (model.kind) {
    case FadingKind::Gamma:
        return std::exp(std::lgamma(model.m + delta) - std::lgamma(model.m) -
                        delta * std::log(model.m));
    case FadingKind::GenGamma:
        return std::exp(std::lgamma(model.m + delta / model.eta) +
                        (delta - 1.0) * std::lgamma(model.m) -
                        delta * std::lgamma(model.m + 1.0 / model.eta));
    case FadingKind::Rice: {
        // Poisson-weighted series of gamma-ratio rows, sharing rate 1 + K.
        const double scale = std::pow(1.0 + model.k_factor, -delta);
        double sum = 0.0;
        for (const auto& term : model.mixture) {
            const double shape = term.kernel.lower[0].shift + 1.0;
            sum += term.weight * std::exp(std::lgamma(shape + delta) - std::lgamma(shape));
        }
        return scale * sum;
    }
    case FadingKind::Lognormal: {
        double sum = 0.0;
        for (const auto& term : model.mixture)
            sum += term.weight * std::pow(*term.atom, delta);
        return sum;
    }
    case FadingKind::FisherF:
        if (delta >= model.m_s)
            throw StripViolation("fractional moment needs delta < ms");
        return std::pow(model.m_s / model.m, delta) *
               std::exp(std::lgamma(model.m + delta) + std::lgamma(model.m_s - delta) -
                        std::lgamma(model.m) - std::lgamma(model.m_s));
    case FadingKind::CustomH:
        return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Grammar: name(key=value, key=[v1,v2,...], ...)

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ConfigError("fading spec '" + std::string(text) + "': " + what);
    }
    void skip_ws()
    {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool consume(char c)
    {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    // Field keys are case-sensitive (the kernel grammar distinguishes the
    // shift lists a, b from the scale lists A, B).
    std::string ident()
    {
        skip_ws();
        std::string out;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            out.push_back(text[pos++]);
        return out;
    }
    double number()
    {
        skip_ws();
        std::size_t consumed = 0;
        double value = 0.0;
        try {
            value = std::stod(std::string(text.substr(pos)), &consumed);
        } catch (const std::exception&) {
            fail("expected a number at position " + std::to_string(pos));
        }
        pos += consumed;
        return value;
    }
};

using FieldMap = std::map<std::string, std::vector<double>>;

FieldMap parse_fields(Parser& p)
{
    FieldMap fields;
    if (!p.consume('('))
        p.fail("expected '(' after the model name");
    if (p.consume(')'))
        return fields;
    while (true) {
        const std::string key = p.ident();
        if (key.empty())
            p.fail("expected a field name");
        if (!p.consume('='))
            p.fail("expected '=' after field '" + key + "'");
        std::vector<double> values;
        if (p.consume('[')) {
            if (!p.consume(']')) {
                do {
                    values.push_back(p.number());
                } while (p.consume(','));
                if (!p.consume(']'))
                    p.fail("expected ']' closing the list for field '" + key + "'");
            }
        } else {
            values.push_back(p.number());
        }
        if (!fields.emplace(key, std::move(values)).second)
            p.fail("duplicate field '" + key + "'");
        if (p.consume(')'))
            break;
        if (!p.consume(','))
            p.fail("expected ',' or ')' after field '" + key + "'");
    }
    p.skip_ws();
    if (p.pos != p.text.size())
        p.fail("unexpected trailing text at position " + std::to_string(p.pos));
    return fields;
}

class Fields {
public:
    Fields(const Parser& p, std::string name, FieldMap map)
        : parser_(p), name_(std::move(name)), map_(std::move(map))
    {
    }
    // Rejects any key outside the model's vocabulary up front, so an
    // unknown field is reported as such rather than as a missing one.
    void restrict(std::initializer_list<const char*> allowed)
    {
        for (const auto& [key, _] : map_)
            if (std::find_if(allowed.begin(), allowed.end(),
                             [&](const char* a) { return key == a; }) == allowed.end())
                parser_.fail("unknown field '" + key + "' for " + name_);
    }
    double scalar(const std::string& key)
    {
        auto it = map_.find(key);
        if (it == map_.end())
            parser_.fail("missing required field '" + key + "' for " + name_);
        if (it->second.size() != 1)
            parser_.fail("field '" + key + "' must be a single number");
        return it->second[0];
    }
    double scalar_or(const std::string& key, double fallback)
    {
        return map_.count(key) ? scalar(key) : fallback;
    }
    std::vector<double> list_or(const std::string& key)
    {
        auto it = map_.find(key);
        return it == map_.end() ? std::vector<double>{} : it->second;
    }

private:
    const Parser& parser_;
    std::string name_;
    FieldMap map_;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

FadingModel parse_fading(std::string_view text)
{
    Parser p{text};
    std::string name = p.ident();
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (name.empty())
        p.fail("expected a model name");
    Fields f(p, name, parse_fields(p));

    FadingModel model;
    if (name == "gamma" || name == "rayleigh" || name == "nakagami") {
        f.restrict({"m"});
        model = make_gamma(name == "rayleigh" ? 1.0 : f.scalar("m"));
    } else if (name == "gengamma") {
        f.restrict({"m", "eta"});
        model = make_gen_gamma(f.scalar("m"), f.scalar("eta"));
    } else if (name == "rice") {
        f.restrict({"k", "terms"});
        model = make_rice(f.scalar("k"), static_cast<int>(f.scalar_or("terms", 64)));
    } else if (name == "lognormal") {
        f.restrict({"mu", "sigma", "n"});
        model = make_lognormal(f.scalar("mu"), f.scalar("sigma"),
                               static_cast<int>(f.scalar_or("n", 24)));
    } else if (name == "fisherf") {
        f.restrict({"m", "ms"});
        model = make_fisher(f.scalar("m"), f.scalar("ms"));
    } else if (name == "foxh") {
        f.restrict({"kappa", "c", "a", "A", "b", "B", "u", "v"});
        FoxHParams P;
        P.kappa = f.scalar_or("kappa", 1.0);
        P.c = f.scalar_or("c", 1.0);
        const auto a = f.list_or("a"), A = f.list_or("A");
        const auto b = f.list_or("b"), B = f.list_or("B");
        if (a.size() != A.size())
            p.fail("lists 'a' and 'A' must have equal length");
        if (b.size() != B.size())
            p.fail("lists 'b' and 'B' must have equal length");
        for (std::size_t i = 0; i < a.size(); ++i)
            P.upper.push_back({a[i], A[i]});
        for (std::size_t j = 0; j < b.size(); ++j)
            P.lower.push_back({b[j], B[j]});
        P.u = static_cast<int>(f.scalar("u"));
        P.v = static_cast<int>(f.scalar("v"));
        model = make_custom(P);
    } else {
        p.fail("unknown model '" + name + "'");
    }
    return model;
}

std::string describe(const FadingModel& model)
{
    switch (model.kind) {
    case FadingKind::Gamma:
        return "gamma(m=" + fmt(model.m) + ")";
    case FadingKind::GenGamma:
        return "gengamma(m=" + fmt(model.m) + ",eta=" + fmt(model.eta) + ")";
    case FadingKind::Rice:
        return "rice(k=" + fmt(model.k_factor) + ")";
    case FadingKind::Lognormal:
        return "lognormal(mu=" + fmt(model.mu) + ",sigma=" + fmt(model.sigma) +
               ",n=" + std::to_string(model.hermite_order) + ")";
    case FadingKind::FisherF:
        return "fisherf(m=" + fmt(model.m) + ",ms=" + fmt(model.m_s) + ")";
    case FadingKind::CustomH: {
        const FoxHParams& P = model.mixture[0].kernel;
        std::ostringstream oss;
        oss << "foxh(kappa=" << fmt(P.kappa) << ",c=" << fmt(P.c) << ",a=[";
        for (std::size_t i = 0; i < P.upper.size(); ++i)
            oss << (i ? "," : "") << fmt(P.upper[i].shift);
        oss << "],A=[";
        for (std::size_t i = 0; i < P.upper.size(); ++i)
            oss << (i ? "," : "") << fmt(P.upper[i].scale);
        oss << "],b=[";
        for (std::size_t j = 0; j < P.lower.size(); ++j)
            oss << (j ? "," : "") << fmt(P.lower[j].shift);
        oss << "],B=[";
        for (std::size_t j = 0; j < P.lower.size(); ++j)
            oss << (j ? "," : "") << fmt(P.lower[j].scale);
        oss << "],u=" << P.u << ",v=" << P.v << ")";
        return oss.str();
    }
    }
    return "?";
}

} // namespace udn
