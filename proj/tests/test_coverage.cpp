// SPDX-License-Identifier: Apache-2.0

#include "udn/coverage.hpp"

#include "udn/fading.hpp"
#include "udn/foxh.hpp"
#include "udn/quadrature.hpp"

#include <doctest.h>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <vector>

using namespace udn;

namespace {

constexpr double kPi = 3.14159265358979323846;

NetworkModel single_tier(double alpha, double beta, double density = 1.0,
                         FadingModel fading = make_gamma(1.0))
{
    NetworkModel net;
    Tier t;
    t.density = density;
    t.power = 1.0;
    t.threshold = beta;
    t.fading = fading;
    t.interferer_fading = fading;
    net.tiers.push_back(std::move(t));
    net.path_loss = Unbounded{alpha};
    return net;
}

NetworkModel dipole(double r, double lambda, double beta,
                    FadingModel fading = make_gamma(1.0))
{
    NetworkModel net = single_tier(4.0, beta, lambda, std::move(fading));
    net.association = FixedDistance{r};
    return net;
}

// phi_c(v) evaluated the boring way, for quadrature cross-checks.
double phi_ref(double c, double v)
{
    return std::pow(v, c) * boost::math::tgamma_lower(1.0 - c, v) - 1.0 + std::exp(-v);
}

} // namespace

// ---------------------------------------------------------------------------
// Building blocks.

TEST_CASE("stable-field ccdf reduces to erfc at delta one half")
{
    // H[x] with chi(s) = Gamma(s)/Gamma(1+s/2) equals erfc(x/2).
    CHECK(stable_ccdf(0.7, 0.5) == doctest::Approx(0.62061794643768968).epsilon(1e-11));
    for (double x : {0.05, 0.3, 1.0, 2.5, 8.0}) {
        CAPTURE(x);
        CHECK(stable_ccdf(x, 0.5) ==
              doctest::Approx(std::erfc(0.5 * x)).epsilon(1e-9));
    }
    CHECK(stable_ccdf(0.0, 0.3) == doctest::Approx(1.0));
    CHECK_THROWS_AS(stable_ccdf(-1.0, 0.5), BadParameter);
    CHECK_THROWS_AS(stable_ccdf(1.0, 1.2), DeltaOutOfRange);
}

TEST_CASE("radial displacement factor: closed form, series/kernel agreement")
{
    // delta = 1/2 closed form sqrt(pi) e^{x^2/4} erfc(x/2).
    CHECK(radial_noise_factor(1.0, 0.5) ==
          doctest::Approx(1.0912827215300941).epsilon(1e-10));
    CHECK(radial_noise_factor(2.0, 0.5) ==
          doctest::Approx(0.75787215614131211).epsilon(1e-10));
    for (double x : {0.2, 0.9, 3.0, 20.0}) {
        CAPTURE(x);
        const double want = std::sqrt(kPi) * std::exp(0.25 * x * x) * std::erfc(0.5 * x);
        CHECK(radial_noise_factor(x, 0.5) == doctest::Approx(want).epsilon(1e-9));
    }

    // Independent route: the same function is the gamma-ratio transform with
    // chi(s) = Gamma(s) Gamma(delta(1-s)).
    for (double delta : {0.3, 0.5, 0.8}) {
        FoxHParams P;
        P.lower.push_back({0.0, 1.0});
        P.u = 1;
        P.upper.push_back({1.0 - delta, delta});
        P.v = 1;
        for (double x : {0.1, 1.0, 3.0, 10.0, 100.0}) {
            CAPTURE(delta);
            CAPTURE(x);
            CHECK(radial_noise_factor(x, delta) ==
                  doctest::Approx(eval(P, x, 1e-11)).epsilon(1e-8));
        }
        // Large-argument limit 1/(delta x).
        CHECK(radial_noise_factor(1e5, delta) ==
              doctest::Approx(1.0 / (delta * 1e5)).epsilon(1e-3));
    }
}

TEST_CASE("ccdf transform turns gain kernels into tail kernels")
{
    // Exponential gain: P(g > x) = e^{-x}.
    const FoxHParams U1 = ccdf_transform(make_gamma(1.0).mixture[0].kernel);
    for (double x : {0.1, 1.0, 5.0})
        CHECK(eval(U1, x, 1e-11) == doctest::Approx(std::exp(-x)).epsilon(1e-9));

    // Unit-mean Gamma(3): P(g > x) = Q(3, 3x); kernel argument is c x = 3x.
    const FoxHParams g3 = make_gamma(3.0).mixture[0].kernel;
    const FoxHParams U3 = ccdf_transform(g3);
    const double pref = g3.kappa / g3.c;
    for (double x : {0.05, 0.5, 1.5, 4.0}) {
        CAPTURE(x);
        CHECK(pref * eval(U3, 3.0 * x, 1e-11) ==
              doctest::Approx(boost::math::gamma_q(3.0, 3.0 * x)).epsilon(1e-9));
    }
}

TEST_CASE("interference exclusion kernels match direct quadrature")
{
    // Rayleigh at xi = 1, delta = 1/2: E[phi_{1/2}(g)]/(delta xi) = pi/2.
    CHECK(interference_psi(make_gamma(1.0), 0.5, 1, 1.0) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-9));

    // Unit-mean Gamma(2) at delta = 0.6 against mpmath-checked quadrature.
    const FadingModel g2 = make_gamma(2.0);
    CHECK(interference_psi(g2, 0.6, 1, 0.3) ==
          doctest::Approx(2.3558562614310754).epsilon(1e-8));
    CHECK(interference_psi(g2, 0.6, 1, 2.0) ==
          doctest::Approx(1.8776065371577015).epsilon(1e-8));
    CHECK(interference_psi(g2, 0.6, 1, 20.0) ==
          doctest::Approx(0.96887723902828302).epsilon(1e-8));

    // Same numbers through real integration of the mixture density.
    for (double xi : {0.4, 3.0}) {
        CAPTURE(xi);
        const double direct =
            integrate_to_inf([&](double g) { return pdf(g2, g) * phi_ref(0.6, xi * g); },
                             0.0, 1e-10)
                .value /
            (0.6 * xi);
        CHECK(interference_psi(g2, 0.6, 1, xi) == doctest::Approx(direct).epsilon(1e-7));
    }

    // Zero limits and ordering.
    CHECK(interference_psi(g2, 0.5, 1, 0.0) == doctest::Approx(1.0 / 0.5));
    CHECK(interference_psi(g2, 0.5, 2, 0.0) == doctest::Approx(1.0 / 0.75));
    CHECK(interference_psi(g2, 0.5, 1, 1e-9) ==
          doctest::Approx(interference_psi(g2, 0.5, 1, 0.0)).epsilon(1e-6));
    for (double xi : {0.1, 1.0, 10.0, 1e3}) {
        CAPTURE(xi);
        const double p1 = interference_psi(make_gamma(3.0), 0.5, 1, xi);
        const double p2 = interference_psi(make_gamma(3.0), 0.5, 2, xi);
        CHECK(p1 > p2);
        CHECK(p2 > 0.0);
    }

    // Atom-based models run through the direct branch.
    const double psi_ln = interference_psi(make_lognormal(0.0, 1.0), 0.5, 1, 2.0);
    CHECK(psi_ln > 0.0);
    CHECK_THROWS_AS(interference_psi(g2, 0.5, 3, 1.0), BadParameter);
}

TEST_CASE("generalized exponential integral: values and recurrence")
{
    CHECK(exponential_integral(2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exponential_integral(3.0, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(exponential_integral(1.0, 0.0), Divergent);
    CHECK(exponential_integral(1.0, 0.7) ==
          doctest::Approx(boost::math::expint(1, 0.7)).epsilon(1e-10));
    for (double nu : {1.5, 2.0}) {
        for (double tau : {0.3, 1.0, 3.0}) {
            CAPTURE(nu);
            CAPTURE(tau);
            const double lhs = exponential_integral(nu + 1.0, tau);
            const double rhs =
                (std::exp(-tau) - tau * exponential_integral(nu, tau)) / nu;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("millimeter-wave propagation constant")
{
    // alpha_los 3, alpha_nlos 4, no blockage: head term 0, tail 1 - 1/2.
    CHECK(mmwave_propagation_constant(3.0, 4.0, 0.0) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(mmwave_propagation_constant(2.0, 4.0, 0.1), ParameterSingularity);
    CHECK_THROWS_AS(mmwave_propagation_constant(3.0, 2.0, 0.1), ParameterSingularity);
    CHECK(mmwave_propagation_constant(3.0, 4.0, 0.5) > 0.0);
}

// ---------------------------------------------------------------------------
// Closest association.

TEST_CASE("closest association: Rayleigh baseline 1/(1 + pi/4)")
{
    const auto est = coverage_closest(single_tier(4.0, 1.0));
    CHECK(est.value == doctest::Approx(0.56009915351155738).epsilon(5e-6));
    CHECK(est.residual < 1e-4);
    CHECK(est.diagnostics.evaluations > 0);
}

TEST_CASE("closest association: Nakagami-2 serving and interference")
{
    // mpmath, alpha = 4, beta = 1, noise-free (triple-quadrature oracle).
    const auto est = coverage_closest(single_tier(4.0, 1.0, 1.0, make_gamma(2.0)));
    CHECK(est.value == doctest::Approx(0.59656562890470859).epsilon(5e-6));
}

TEST_CASE("closest association: density invariance without noise")
{
    const auto base = coverage_closest(single_tier(4.0, 1.0, 1.0));
    const auto scaled = coverage_closest(single_tier(4.0, 1.0, 7.0));
    CHECK(std::abs(base.value - scaled.value) < 1e-12);
}

TEST_CASE("closest association: threshold monotonicity")
{
    double prev = 1.0;
    for (double beta : {0.5, 1.0, 2.0, 4.0}) {
        CAPTURE(beta);
        const double c = coverage_closest(single_tier(4.0, beta)).value;
        CHECK(c < prev);
        CHECK(c > 0.0);
        prev = c;
    }
}

TEST_CASE("closest association: two tiers with distinct powers and thresholds")
{
    // mpmath oracle: lam {1,3}, P {1,16}, beta {1,2}, Rayleigh, alpha 4.
    NetworkModel net = single_tier(4.0, 1.0);
    Tier t2 = net.tiers[0];
    t2.density = 3.0;
    t2.power = 16.0;
    t2.threshold = 2.0;
    net.tiers.push_back(t2);
    const auto est = coverage_closest(net);
    CHECK(est.value == doctest::Approx(0.43571253669945169).epsilon(5e-6));
}

TEST_CASE("closest association: noise displacement against first principles")
{
    // mpmath oracle: Rayleigh, alpha 4, beta 1, lambda 1, sigma^2 = 0.5.
    NetworkModel net = single_tier(4.0, 1.0);
    net.noise = 0.5;
    const auto est = coverage_closest(net);
    CHECK(est.value == doctest::Approx(0.54377107916852207).epsilon(2e-5));

    // Densification drives the noisy network to the interference-limited
    // value from below.
    NetworkModel net10 = net;
    net10.tiers[0].density = 10.0;
    const double c0 = 0.56009915351155738;
    const double d1 = c0 - est.value;
    const double d10 = c0 - coverage_closest(net10).value;
    CHECK(d1 > 0.0);
    CHECK(d10 > 0.0);
    CHECK(d10 < d1);
    CHECK(d10 < 1e-3);
}

TEST_CASE("closest association: transmit-gain tier equals equivalent gamma fading")
{
    NetworkModel gain_net = single_tier(4.0, 1.0);
    gain_net.tiers[0].antennas = 2;
    gain_net.tiers[0].miso_gain = GammaGain{2.0, 0.5};
    const NetworkModel fade_net = single_tier(4.0, 1.0, 1.0, make_gamma(2.0));
    // Same serving kernel; interferers stay Rayleigh in gain_net.
    NetworkModel ref = fade_net;
    ref.tiers[0].interferer_fading = make_gamma(1.0);
    const double a = coverage_closest(gain_net).value;
    const double b = coverage_closest(ref).value;
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
}

TEST_CASE("closest association: bounded path loss against first principles")
{
    // mpmath double-quadrature oracles, Rayleigh, alpha 4, beta 1.
    NetworkModel net = single_tier(4.0, 1.0, 0.2);
    net.path_loss = Bounded{4.0};
    CHECK(coverage_closest(net).value ==
          doctest::Approx(0.27397339713464235).epsilon(2e-5));
    net.tiers[0].density = 1.0;
    CHECK(coverage_closest(net).value ==
          doctest::Approx(0.074552912379052173).epsilon(2e-5));
    net.tiers[0].density = 3.0;
    CHECK(coverage_closest(net).value ==
          doctest::Approx(0.0062905339003347588).epsilon(5e-4));
}

TEST_CASE("closest association: bounded tends to unbounded in the sparse limit")
{
    NetworkModel net = single_tier(4.0, 1.0, 1e-4);
    net.path_loss = Bounded{4.0};
    CHECK(coverage_closest(net).value ==
          doctest::Approx(0.56009915351155738).epsilon(5e-3));
}

TEST_CASE("closest association: rejections")
{
    NetworkModel net = single_tier(4.0, 1.0);
    net.association = StrongestBS{};
    CHECK_THROWS_AS(coverage_closest(net), InvalidAssociation);

    NetworkModel mm = single_tier(4.0, 1.0);
    mm.path_loss = MmWave{};
    CHECK_THROWS_AS(coverage_closest(mm), NotApplicable);

    // Point-mass serving components are not supported on this route.
    NetworkModel ln = single_tier(4.0, 1.0, 1.0, make_lognormal(0.0, 1.0));
    ln.tiers[0].interferer_fading = make_gamma(1.0);
    CHECK_THROWS_AS(coverage_closest(ln), NotApplicable);

    // ... but lognormal interferers are fine.
    NetworkModel ln_int = single_tier(4.0, 1.0);
    ln_int.tiers[0].interferer_fading = make_lognormal(0.0, 0.5);
    const auto est = coverage_closest(ln_int);
    CHECK(est.value > 0.0);
    CHECK(est.value < 1.0);
}

// ---------------------------------------------------------------------------
// Strongest association.

TEST_CASE("strongest association: Rayleigh baseline 2/pi")
{
    NetworkModel net = single_tier(4.0, 1.0);
    net.association = StrongestBS{};
    const auto est = coverage_strongest(net);
    CHECK(est.value == doctest::Approx(2.0 / kPi).epsilon(1e-10));
}

TEST_CASE("strongest association: closed form across the gain catalog")
{
    // C = sinc(delta) * sum lam P^d b^-d L_des / sum lam P^d L_int.
    const double delta = 0.5;
    const std::vector<FadingModel> models = {
        make_gamma(2.5), make_gen_gamma(2.0, 1.5), make_rice(4.0),
        make_lognormal(0.0, 1.0), make_fisher(2.0, 3.0)};
    for (const auto& serving : models) {
        CAPTURE(describe(serving));
        NetworkModel net = single_tier(4.0, 4.0, 0.7, serving);
        net.tiers[0].interferer_fading = make_gamma(2.0);
        net.association = StrongestBS{};
        const double want = std::sin(kPi * delta) / (kPi * delta) *
                            std::pow(4.0, -delta) * lambda_moment(serving, delta) /
                            lambda_moment(make_gamma(2.0), delta);
        CHECK(coverage_strongest(net).value == doctest::Approx(want).epsilon(1e-7));
    }
}

TEST_CASE("strongest association: two-tier mixture and MISO gain")
{
    NetworkModel net = single_tier(4.0, 1.0);
    Tier t2 = net.tiers[0];
    t2.density = 2.0;
    t2.power = 5.0;
    t2.threshold = 3.0;
    net.tiers.push_back(t2);
    net.association = StrongestBS{};
    const double d = 0.5;
    const double num = 1.0 * 1.0 * std::pow(1.0, -d) * std::tgamma(1.0 + d) +
                       2.0 * std::pow(5.0, d) * std::pow(3.0, -d) * std::tgamma(1.0 + d);
    const double den =
        (1.0 + 2.0 * std::pow(5.0, d)) * std::tgamma(1.0 + d);
    const double want = std::sin(kPi * d) / (kPi * d) * num / den;
    CHECK(coverage_strongest(net).value == doctest::Approx(want).epsilon(1e-12));

    // A GammaGain(3, 1/3) transmitter equals unit-mean Gamma(3) fading.
    NetworkModel miso = single_tier(4.0, 1.0);
    miso.association = StrongestBS{};
    miso.tiers[0].antennas = 3;
    miso.tiers[0].miso_gain = GammaGain{3.0, 1.0 / 3.0};
    NetworkModel ref = single_tier(4.0, 1.0, 1.0, make_gamma(3.0));
    ref.association = StrongestBS{};
    ref.tiers[0].interferer_fading = make_gamma(1.0);
    CHECK(coverage_strongest(miso).value ==
          doctest::Approx(coverage_strongest(ref).value).epsilon(1e-14));
}

TEST_CASE("strongest association: rejections and flags")
{
    NetworkModel net = single_tier(4.0, 1.0);
    CHECK_THROWS_AS(coverage_strongest(net), InvalidAssociation);
    net.association = StrongestBS{};
    net.path_loss = Bounded{4.0};
    CHECK_THROWS_AS(coverage_strongest(net), NotApplicable);

    NetworkModel low = single_tier(4.0, 0.5);
    low.association = StrongestBS{};
    const auto est = coverage_strongest(low);
    bool flagged = false;
    for (const auto& f : est.diagnostics.flags)
        flagged = flagged || f == "threshold-below-validity";
    CHECK(flagged);
}

// ---------------------------------------------------------------------------
// Fixed-distance association.

TEST_CASE("fixed-distance link: Rayleigh exponential form")
{
    const auto est = coverage_adhoc(dipole(10.0, 1e-3, 1.0));
    const double x = 0.49348022005446793; // pi^2/20
    CHECK(est.value == doctest::Approx(std::exp(-x)).epsilon(1e-8));
}

TEST_CASE("fixed-distance link: Nakagami-2 closed form e^{-N}(1 + N/2)")
{
    const auto est = coverage_adhoc(dipole(10.0, 1e-3, 1.0, make_gamma(2.0)));
    CHECK(est.value == doctest::Approx(0.65355461193208524).epsilon(1e-8));
}

TEST_CASE("fixed-distance link: lognormal serving runs through point masses")
{
    const auto est = coverage_adhoc(dipole(5.0, 1e-3, 1.0, make_lognormal(0.0, 1.0)));
    CHECK(est.value > 0.0);
    CHECK(est.value < 1.0);
    NetworkModel net = dipole(5.0, 1e-3, 1.0);
    net.association = ClosestBS{};
    CHECK_THROWS_AS(coverage_adhoc(net), InvalidAssociation);
}

TEST_CASE("fixed-distance link: large-density asymptote")
{
    // Rayleigh: the asymptote is the exact value at every density.
    NetworkModel ray = dipole(10.0, 1.0, 1.0);
    for (double lam : {1e-3, 1e-2, 0.1}) {
        CAPTURE(lam);
        NetworkModel at = ray;
        at.tiers[0].density = lam;
        CHECK(adhoc_asymptote(ray, lam) ==
              doctest::Approx(coverage_adhoc(at).value).epsilon(1e-8));
    }

    // Nakagami-2: the ratio approaches one from the exact side as the
    // argument grows.
    NetworkModel nak = dipole(10.0, 1.0, 1.0, make_gamma(2.0));
    double prev_err = 1e9;
    for (double lam : {0.003, 0.01, 0.03}) {
        CAPTURE(lam);
        NetworkModel at = nak;
        at.tiers[0].density = lam;
        const double exact = coverage_adhoc(at).value;
        const double asym = adhoc_asymptote(nak, lam);
        const double err = std::abs(asym / exact - 1.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 0.25);

    // Fisher serving kernels are outside the exponential class.
    CHECK_THROWS_AS(adhoc_asymptote(dipole(10.0, 1.0, 1.0, make_fisher(2.0, 3.0)), 1.0),
                    NotApplicable);
}

// ---------------------------------------------------------------------------
// Limits, approximations, scalings.

TEST_CASE("dense-network limit")
{
    NetworkModel net = single_tier(4.0, 1.0);
    net.noise = 0.3; // ignored by the limit
    CHECK(dense_limit(net) == doctest::Approx(0.56009915351155738).epsilon(5e-6));

    NetworkModel uneven = net;
    Tier t2 = uneven.tiers[0];
    t2.density = 2.0;
    uneven.tiers.push_back(t2);
    CHECK_THROWS_AS(dense_limit(uneven), BadParameter);

    NetworkModel bounded = single_tier(4.0, 1.0);
    bounded.path_loss = Bounded{4.0};
    CHECK_THROWS_AS(dense_limit(bounded), BadParameter); // needs lambda_common
    CHECK(dense_limit(bounded, 1.0) ==
          doctest::Approx(0.074552912379052173).epsilon(2e-5));
}

TEST_CASE("bounded MISO approximation")
{
    CHECK(miso_bounded_approx(0.0, 4, 1.0, 4.0) == doctest::Approx(1.0));
    // n_t = 1 reduces to an exponential.
    const double x = 2.0 * kPi * 0.3 * 1.5 / (3.0 * 2.0);
    CHECK(miso_bounded_approx(0.3, 1, 1.5, 4.0) ==
          doctest::Approx(std::exp(-x)).epsilon(1e-13));
    // Dual route: Q(n, x) as a gamma-ratio transform value.
    FoxHParams Q;
    Q.lower.push_back({0.0, 1.0});
    Q.lower.push_back({3.0, 1.0});
    Q.u = 2;
    Q.upper.push_back({1.0, 1.0});
    Q.v = 0;
    for (double lam : {0.05, 0.2, 0.5}) {
        CAPTURE(lam);
        const double arg = 2.0 * kPi * lam * 1.0 / (3.0 * 2.0);
        CHECK(miso_bounded_approx(lam, 3, 1.0, 4.0) ==
              doctest::Approx(eval(Q, arg, 1e-12) / std::tgamma(3.0)).epsilon(1e-10));
    }
    double prev = 2.0;
    for (double lam : {0.1, 0.5, 1.0, 3.0}) {
        const double c = miso_bounded_approx(lam, 4, 1.0, 4.0);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("millimeter-wave and elevated approximations")
{
    NetworkModel mm = single_tier(4.0, 1.0);
    mm.path_loss = MmWave{3.0, 4.0, 0.0, 0.5, 1.0, 28.0};
    const double x = kPi * 0.2 * 1.0 * 1.0 * 1.0 * 0.5 / 0.5;
    CHECK(mmwave_approx(0.2, 3, mm) ==
          doctest::Approx(boost::math::gamma_q(3.0, x)).epsilon(1e-13));
    CHECK_THROWS_AS(mmwave_approx(0.2, 3, single_tier(4.0, 1.0)), NotApplicable);

    NetworkModel td = single_tier(4.0, 2.0);
    td.path_loss = ThreeD{4.0, 1.5};
    const double xt = 2.0 * kPi * 0.2 * 2.25 * 2.0 / 2.0;
    CHECK(threed_approx(0.2, 2, td) ==
          doctest::Approx(boost::math::gamma_q(2.0, xt)).epsilon(1e-13));
    CHECK_THROWS_AS(threed_approx(0.2, 2, mm), NotApplicable);
}

TEST_CASE("critical scaling ratios")
{
    NetworkModel td = single_tier(4.0, 1.0);
    td.path_loss = ThreeD{4.0, 1.0};
    CHECK(optimal_scaling(OptimalScalingKind::ThreeD, td) ==
          doctest::Approx(kPi).epsilon(1e-12));

    NetworkModel mm = single_tier(4.0, 1.0);
    mm.path_loss = MmWave{3.0, 4.0, 0.0, 0.5, 1.0, 28.0};
    CHECK(optimal_scaling(OptimalScalingKind::MmWave, mm) ==
          doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("joint antenna-density scaling limits")
{
    // Cellular: a step in zeta at 2 pi beta / eta.
    NetworkModel bd = single_tier(4.0, 1.0);
    bd.path_loss = Bounded{4.0};
    const double zc = 2.0 * kPi * 1.0 / (3.0 * 2.0);
    CHECK(scaling_limit(ScalingRegime::Cellular, 1.1 * zc, bd) == doctest::Approx(1.0));
    CHECK(scaling_limit(ScalingRegime::Cellular, 0.9 * zc, bd) == doctest::Approx(0.0));
    CHECK(scaling_limit(ScalingRegime::Cellular, 0.0, bd) == doctest::Approx(0.0));

    // MmWave: a step at the critical ratio.
    NetworkModel mm = single_tier(4.0, 1.0);
    mm.path_loss = MmWave{3.0, 4.0, 0.0, 0.5, 1.0, 28.0};
    CHECK(scaling_limit(ScalingRegime::MmWave, 1.1 * kPi, mm) == doctest::Approx(1.0));
    CHECK(scaling_limit(ScalingRegime::MmWave, 0.9 * kPi, mm) == doctest::Approx(0.0));

    // Fixed-distance: a smooth stable-field ccdf in gamma.
    NetworkModel ad = dipole(1.0, 1.0, 1.0);
    const double T = kPi * std::tgamma(0.5) * std::tgamma(1.5);
    CHECK(scaling_limit(ScalingRegime::AdHoc, 1.0, ad) ==
          doctest::Approx(stable_ccdf(T, 0.5)).epsilon(1e-10));
    double prev = 0.0;
    for (double g : {0.5, 1.0, 2.0, 8.0}) {
        CAPTURE(g);
        const double c = scaling_limit(ScalingRegime::AdHoc, g, ad);
        CHECK(c > prev);
        prev = c;
    }
    CHECK(scaling_limit(ScalingRegime::AdHoc,
                        std::numeric_limits<double>::infinity(), ad) == 1.0);
}

TEST_CASE("fixed-distance MISO converges to its scaling limit")
{
    // n_t = lambda^2 at delta = 1/2 (gamma = 1): the finite-antenna value
    // approaches the stable-field limit from the exact engine.
    NetworkModel cfg = dipole(1.0, 1.0, 1.0);
    const double limit = scaling_limit(ScalingRegime::AdHoc, 1.0, cfg);
    double prev_err = 1e9;
    for (double lam : {2.0, 4.0, 8.0}) {
        CAPTURE(lam);
        NetworkModel net = dipole(1.0, lam, 1.0);
        net.tiers[0].antennas = static_cast<int>(lam * lam);
        net.tiers[0].miso_gain = GammaGain{lam * lam, 1.0};
        const double err = std::abs(coverage_adhoc(net).value - limit);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 0.05);
}
