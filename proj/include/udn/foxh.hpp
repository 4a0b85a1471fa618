// SPDX-License-Identifier: Apache-2.0
//
// Mellin-Barnes kernel evaluator.
//
// A kernel is the gamma-product ratio
//
//   chi(s) = prod_{j<u} Gamma(b_j + B_j s) * prod_{i<v} Gamma(1 - a_i - A_i s)
//          / [ prod_{i>=v} Gamma(a_i + A_i s) * prod_{j>=u} Gamma(1 - b_j - B_j s) ]
//
// and the associated function H(z) = (1/2 pi i) Int chi(s) z^{-s} ds along a
// vertical contour separating the ascending poles s = -(b_j + l)/B_j from the
// descending poles s = (1 - a_i + l)/A_i.  The (kappa, c) fields normalize a
// probability density f(x) = kappa * H(c x); eval() itself always evaluates
// the bare H at the argument it is given.

#pragma once

#include "udn/errors.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace udn {

/// One Gamma(shift + scale * s)-style parameter pair; scale > 0.
struct GammaPair {
    double shift = 0.0;
    double scale = 1.0;
};

struct FoxHParams {
    double kappa = 1.0; ///< density normalizer, f(x) = kappa H(c x)
    double c = 1.0;     ///< argument scale of the density
    std::vector<GammaPair> upper; ///< (a_i, A_i); the first v are numerator factors
    std::vector<GammaPair> lower; ///< (b_j, B_j); the first u are numerator factors
    int u = 0;
    int v = 0;
};

/// Throws BadParameter unless the pair lists, counts and scales are sane.
void validate(const FoxHParams& params);

/// Cancels identical numerator/denominator pairs (numerator-lower against
/// denominator-upper and numerator-upper against denominator-lower).  All
/// analysis runs on the reduced kernel so that the decay-rate and growth
/// constants describe the function actually being evaluated.
FoxHParams reduce(const FoxHParams& params);

/// Growth/decay constants of a kernel (all computed on the reduced kernel).
struct ConvergenceInfo {
    double a_star = 0.0;        ///< contour decay rate: |chi| ~ e^{-a_star pi |t| / 2}
    double delta_star = 0.0;    ///< sum B - sum A; sign selects the convergent series side
    double mu = 0.0;            ///< algebraic exponent sum b - sum a + (p - q)/2
    double contour_abscissa = 0.0; ///< default vertical line inside the pole gap
    // Large-argument growth triplet: H ~ z^{(nu + 1/2)/Delta} exp(-Delta (z/rho)^{1/Delta}).
    // With a transform order delta in (0,1) these describe the delta-transformed
    // kernel; with delta absent they are the kernel's own constants.
    double Delta = 0.0;
    double rho = 0.0;
    double nu = 0.0;
};

/// Computes the constants above.  delta, when given, must lie in (0, 1).
/// Throws PoleCollision when no separating contour exists.
ConvergenceInfo convergence_params(const FoxHParams& params,
                                   std::optional<double> delta = std::nullopt);

/// Optional diagnostics from eval().
struct EvalInfo {
    double residual = 0.0;   ///< internal error estimate
    long evaluations = 0;    ///< chi evaluations consumed
    enum class Route { contour, series_left, series_right, limit } route = Route::contour;
};

/// Evaluates H(z) for z >= 0 to (roughly) |error| < tol * max(1, |H|).
/// Throws Divergent when the value does not exist at this argument and
/// NoConvergence when the evaluation budget or conditioning is exhausted.
double eval(const FoxHParams& params, double z, double tol = 1e-9,
            EvalInfo* info = nullptr);

/// E[g^s] of the density f(x) = kappa H(c x), via the Mellin identity
/// E[g^s] = kappa c^{-(s+1)} chi(s + 1).  Throws StripViolation if s + 1
/// leaves the fundamental strip (a numerator gamma argument becomes <= 0).
double mellin_moment(const FoxHParams& params, double s);

enum class AsymptoticRegime { near_zero, at_infinity };

/// Leading asymptotic term.  near_zero: first ascending-pole residue term.
/// at_infinity: first descending-pole term when v > 0, or the full
/// exponential-decay leading form when u == q and v == 0.  Throws
/// NotApplicable for kernel classes outside those cases.
double asymptotic_eval(const FoxHParams& params, double z, AsymptoticRegime regime);

/// log chi(s) for complex s (branch unspecified; intended for exp of sums).
/// Poles/zeros of chi raise no error: the caller keeps contours away from them.
std::complex<double> log_chi(const FoxHParams& params, std::complex<double> s);

/// chi(s) for real s in log-magnitude/sign form (exact zeros give sign 0).
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
};
SignedLog chi_real(const FoxHParams& params, double s);

/// eval() in signed-log form, for kernels whose values leave double range
/// (e.g. gamma shapes in the thousands): returns {log|H(z)|, sign}.
/// sign == 0 encodes an exact zero (including values whose contour bound
/// falls below roughly exp(-800), which are zero in double precision).
SignedLog eval_log(const FoxHParams& params, double z, double tol = 1e-9,
                   EvalInfo* info = nullptr);

/// Admissible contour gap (lo, hi); lo = -inf when u == 0, hi = +inf when
/// v == 0.  Throws PoleCollision when lo >= hi.
struct PoleGap {
    double lo;
    double hi;
};
PoleGap pole_gap(const FoxHParams& params);

} // namespace udn
