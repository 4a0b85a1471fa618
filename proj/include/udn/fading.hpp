// SPDX-License-Identifier: Apache-2.0
//
// Channel power-gain models: catalog distributions expressed as mixtures of
// kernel densities f(g) = kappa H(c g) and point masses, their densities,
// and the fractional interference moment E[g^delta].

#pragma once

#include "udn/errors.hpp"
#include "udn/foxh.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace udn {

enum class FadingKind { Gamma, GenGamma, Rice, Lognormal, FisherF, CustomH };

// One mixture component: either a point mass at `atom` or a kernel density.
struct MixtureTerm {
    double weight = 1.0;
    std::optional<double> atom;
    FoxHParams kernel;
};

struct FadingModel {
    FadingKind kind = FadingKind::Gamma;

    // Construction parameters, retained for closed-form moments and for the
    // native samplers in the simulator.  Only the fields relevant to `kind`
    // are meaningful.
    double m = 1.0;        // Gamma / GenGamma / FisherF shape
    double eta = 1.0;      // GenGamma power
    double k_factor = 0.0; // Rice
    double mu = 0.0;       // Lognormal location (base-10)
    double sigma = 1.0;    // Lognormal scale (base-10)
    double m_s = 2.0;      // FisherF shadowing shape
    int hermite_order = 24;
    int max_terms = 64;

    std::vector<MixtureTerm> mixture;
    // First moment; NaN when the custom kernel's strip excludes order one.
    double mean = 1.0;
};

// Catalog constructors.  Gamma, GenGamma and Rice are built with unit mean;
// FisherF has mean m_s/(m_s - 1); Lognormal keeps its natural mean.
FadingModel make_gamma(double m);
FadingModel make_gen_gamma(double m, double eta);
FadingModel make_rice(double k_factor, int max_terms = 64);
FadingModel make_lognormal(double mu, double sigma, int hermite_order = 24);
FadingModel make_fisher(double m, double m_s);
FadingModel make_custom(const FoxHParams& kernel);

// Density at x >= 0.  Point-mass mixtures (Lognormal) have no kernel
// density; the analytic lognormal density is returned instead and
// *analytic_fallback, when given, is set accordingly.
double pdf(const FadingModel& model, double x, bool* analytic_fallback = nullptr);

// E[g^delta] for delta in (0,1): the only fading statistic the interference
// field contributes.  Generic mixture path; throws StripViolation when the
// moment does not exist (FisherF needs delta < m_s).
double lambda_moment(const FadingModel& model, double delta);

// Closed-form moment for catalog models (gamma-ratio rows of the model
// table); nullopt for CustomH.  Used as a fast path and as the
// cross-consistency oracle against lambda_moment.
std::optional<double> lambda_moment_table(const FadingModel& model, double delta);

// Parses the model grammar used by CLI configs:
//   gamma(m=2.5), gengamma(m=2,eta=1.5), rice(k=5),
//   lognormal(mu=0,sigma=1,n=24), fisherf(m=2,ms=3),
//   foxh(kappa=1,c=1,a=[..],A=[..],b=[..],B=[..],u=1,v=0)
// Throws ConfigError naming the offending field.
FadingModel parse_fading(std::string_view text);

// Canonical spelling of a model in the same grammar (for CSV and messages).
std::string describe(const FadingModel& model);

} // namespace udn
