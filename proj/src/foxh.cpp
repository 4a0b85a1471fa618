// SPDX-License-Identifier: Apache-2.0
//
// Kernel evaluator internals.
//
// Evaluation strategy, in order of preference:
//   * z = 0 and other limits are resolved from the leading ascending pole;
//   * far inside a convergent power-series region (z much smaller/larger than
//     the series radius marker delta_K) the residue series is used directly,
//     which also sidesteps the cancellation a vertical contour suffers when
//     the answer is algebraically tiny;
//   * otherwise a vertical contour through the pole gap is integrated with
//     fixed Gauss-Legendre panels and global step halving.  When the gap is
//     unbounded on one side the abscissa is placed near the real saddle of
//     |chi(s) z^{-s}| (a golden-section search), which keeps the integrand
//     scale comparable to the result and makes exponentially small values
//     such as e^{-20} recoverable at full absolute accuracy;
//   * kernels whose contour decay rate a* is too small fall back to the
//     residue series, and vice versa on failure.

#include "udn/foxh.hpp"
#include "udn/complex_gamma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace udn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kEvalCap = 1L << 20;

// One gamma factor of chi: Gamma(base + slope * s), numerator or denominator.
struct ChiFactor {
    double base;
    double slope; // signed: +B / -A style
    bool num;
};

std::vector<ChiFactor> chi_factors(const FoxHParams& P)
{
    std::vector<ChiFactor> f;
    f.reserve(P.upper.size() + P.lower.size());
    for (int j = 0; j < P.u; ++j)
        f.push_back({P.lower[j].shift, P.lower[j].scale, true});
    for (int i = 0; i < P.v; ++i)
        f.push_back({1.0 - P.upper[i].shift, -P.upper[i].scale, true});
    for (std::size_t i = P.v; i < P.upper.size(); ++i)
        f.push_back({P.upper[i].shift, P.upper[i].scale, false});
    for (std::size_t j = P.u; j < P.lower.size(); ++j)
        f.push_back({1.0 - P.lower[j].shift, -P.lower[j].scale, false});
    return f;
}

double delta_k(const FoxHParams& P)
{
    double log_dk = 0.0;
    for (const auto& [a, A] : P.upper)
        log_dk -= A * std::log(A);
    for (const auto& [b, B] : P.lower)
        log_dk += B * std::log(B);
    return std::exp(log_dk);
}

double a_star_of(const FoxHParams& P)
{
    double a = 0.0;
    for (int i = 0; i < static_cast<int>(P.upper.size()); ++i)
        a += (i < P.v) ? P.upper[i].scale : -P.upper[i].scale;
    for (int j = 0; j < static_cast<int>(P.lower.size()); ++j)
        a += (j < P.u) ? P.lower[j].scale : -P.lower[j].scale;
    return a;
}

double delta_star_of(const FoxHParams& P)
{
    double d = 0.0;
    for (const auto& [b, B] : P.lower)
        d += B;
    for (const auto& [a, A] : P.upper)
        d -= A;
    return d;
}

double mu_of(const FoxHParams& P)
{
    double m = 0.0;
    for (const auto& [b, B] : P.lower)
        m += b;
    for (const auto& [a, A] : P.upper)
        m -= a;
    return m + 0.5 * (static_cast<double>(P.upper.size()) - static_cast<double>(P.lower.size()));
}

// ---------------------------------------------------------------------------
// Residue machinery.

// A cluster of coincident poles at s0 with the residue of chi(s) z^{-s},
// assuming the net pole order there is one.
struct ResidueTerm {
    double s0 = 0.0;
    int order = 0;        // net order: numerator poles minus denominator zeros
    double log_abs = 0.0; // log |residue| excluding the z^{-s0} factor
    int sign = 1;
};

ResidueTerm residue_at(const std::vector<ChiFactor>& factors, double s0)
{
    ResidueTerm term;
    term.s0 = s0;
    for (const auto& fac : factors) {
        const double arg = fac.base + fac.slope * s0;
        const double l = std::round(-arg);
        const bool at_pole = l >= -0.5 && std::abs(arg + l) < 1e-9 * (1.0 + std::abs(arg));
        if (at_pole) {
            const double lf = std::lgamma(l + 1.0);
            const int parity = (static_cast<long long>(l) % 2 == 0) ? 1 : -1;
            const int slope_sign = fac.slope > 0 ? 1 : -1;
            if (fac.num) {
                // lim (s - s0) Gamma(arg(s)) = (-1)^l / (l! * slope)
                term.order += 1;
                term.log_abs -= lf + std::log(std::abs(fac.slope));
                term.sign *= parity * slope_sign;
            } else {
                // 1/Gamma(arg(s)) ~ (-1)^l l! * slope * (s - s0)
                term.order -= 1;
                term.log_abs += lf + std::log(std::abs(fac.slope));
                term.sign *= parity * slope_sign;
            }
        } else {
            const SignedLogGamma g = log_gamma_signed(arg);
            term.log_abs += fac.num ? g.log_abs : -g.log_abs;
            term.sign *= g.sign;
        }
    }
    return term;
}

// Merged stream of pole locations from the numerator factors on one side.
// left: ascending poles (slope > 0), enumerated downward from the gap edge.
// right: descending poles (slope < 0), enumerated upward.
class PoleStream {
public:
    PoleStream(const std::vector<ChiFactor>& factors, bool left)
        : left_(left)
    {
        for (const auto& fac : factors) {
            if (!fac.num)
                continue;
            if (left && fac.slope > 0.0)
                streams_.push_back({fac.base, fac.slope, 0});
            else if (!left && fac.slope < 0.0)
                streams_.push_back({fac.base, fac.slope, 0});
        }
    }

    bool empty() const { return streams_.empty(); }

    // Next distinct pole location (coincident locations are merged).
    double next()
    {
        double best = left_ ? -kInf : kInf;
        for (const auto& st : streams_) {
            const double s = pos(st);
            if (left_ ? (s > best) : (s < best))
                best = s;
        }
        for (auto& st : streams_) {
            if (std::abs(pos(st) - best) <= 1e-9 * (1.0 + std::abs(best)))
                ++st.l;
        }
        return best;
    }

private:
    struct Stream {
        double base;
        double slope;
        long l;
    };
    double pos(const Stream& st) const { return -(st.base + st.l) / st.slope; }

    std::vector<Stream> streams_;
    bool left_;
};

// Walks the pole groups on one side until the first group with net order >= 1.
// Used for z -> 0 limits and leading asymptotics.
std::optional<ResidueTerm> leading_group(const FoxHParams& P, bool left)
{
    const auto factors = chi_factors(P);
    PoleStream stream(factors, left);
    if (stream.empty())
        return std::nullopt;
    for (int n = 0; n < 4096; ++n) {
        const ResidueTerm t = residue_at(factors, stream.next());
        if (t.order >= 1)
            return t;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Residue series evaluation.

// The running sum is kept as sign * exp(shift) * sum_scaled with the shift
// pinned to the largest term magnitude seen, so kernels whose residues span
// hundreds of orders of magnitude (e.g. gamma shapes in the thousands)
// accumulate without ever leaving double range.
SignedLog series_eval_log(const FoxHParams& P, double z, double tol, bool left,
                          EvalInfo* info)
{
    const auto factors = chi_factors(P);
    PoleStream stream(factors, left);
    const double lnz = std::log(z);
    const int orientation = left ? 1 : -1;

    double shift = -kInf;
    double sum_scaled = 0.0;
    double max_term_log = -kInf;
    int tiny_run = 0;
    long skip_run = 0;
    long groups = 0;
    for (; groups < 200000; ++groups) {
        if (stream.empty())
            break;
        const double s0 = stream.next();
        const ResidueTerm t = residue_at(factors, s0);
        if (t.order <= 0) {
            // Denominator zeros can cancel whole arithmetic progressions of
            // numerator poles.  A long unbroken run of such cancellations
            // means the chain has terminated for good (the alignments are
            // periodic in the pole index), so the series is complete.
            if (++skip_run > 200)
                break;
            continue;
        }
        skip_run = 0;
        if (t.order >= 2)
            throw NoConvergence("residue series hit a pole of order " +
                                std::to_string(t.order) + " at s = " + std::to_string(s0));
        const double term_log = t.log_abs - s0 * lnz;
        if (std::isinf(term_log) && term_log > 0.0)
            throw NoConvergence("residue series term overflowed");
        max_term_log = std::max(max_term_log, term_log);
        if (term_log > shift) {
            sum_scaled *= std::exp(shift - term_log);
            shift = term_log;
        }
        const double term_scaled = std::exp(term_log - shift);
        sum_scaled += t.sign * term_scaled;
        // Same stop rule as the linear accumulator, expressed at the shifted
        // scale: max_term_log <= shift, so the exp stays bounded, and the
        // 1e-300 absolute floor translates to exp(log(1e-300) - shift).
        const double floor_scaled = std::exp(std::min(700.0, -690.77 - shift));
        const double thresh =
            tol * (std::abs(sum_scaled) + 1e-16 * std::exp(max_term_log - shift)) + floor_scaled;
        if (term_scaled < thresh) {
            if (++tiny_run >= 4)
                break;
        } else {
            tiny_run = 0;
        }
    }
    if (groups >= 200000)
        throw NoConvergence("residue series failed to settle within the term cap");
    const double sum_log =
        shift + std::log(std::abs(sum_scaled)); // -inf when the sum is zero
    if (max_term_log > 27.7 + std::max(sum_log, -667.0))
        throw NoConvergence("residue series lost all significance to cancellation");
    if (info) {
        info->route = left ? EvalInfo::Route::series_left : EvalInfo::Route::series_right;
        info->evaluations += groups;
        info->residual = tol * std::exp(std::min(700.0, sum_log));
    }
    SignedLog out;
    if (sum_scaled == 0.0) {
        out.sign = 0;
        out.log_abs = -kInf;
    } else {
        out.sign = orientation * (sum_scaled > 0.0 ? 1 : -1);
        out.log_abs = sum_log;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Contour evaluation.

double golden_min(const std::function<double(double)>& f, double a, double b)
{
    constexpr double inv_phi = 0.61803398874989485;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 70 && (b - a) > 1e-10 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

double saddle_abscissa(const FoxHParams& P, double lnz, double lo, double hi)
{
    const auto f = [&](double sigma) {
        return log_chi(P, std::complex<double>(sigma, 0.0)).real() - sigma * lnz;
    };
    if (std::isfinite(lo) && std::isfinite(hi))
        return 0.5 * (lo + hi);
    if (std::isfinite(lo)) {
        double margin = kInf;
        for (int j = 0; j < P.u; ++j)
            margin = std::min(margin, 1.0 / P.lower[j].scale);
        const double a = lo + 0.25 * margin;
        double b = a + 4.0;
        while (b < lo + 2e4 && f(b) < f(b - 1.0))
            b = lo + (b - lo) * 1.7;
        return golden_min(f, a, b);
    }
    if (std::isfinite(hi)) {
        double margin = kInf;
        for (int i = 0; i < P.v; ++i)
            margin = std::min(margin, 1.0 / P.upper[i].scale);
        const double b = hi - 0.25 * margin;
        double a = b - 4.0;
        while (a > hi - 2e4 && f(a) < f(a + 1.0))
            a = hi - (hi - a) * 1.7;
        return golden_min(f, a, b);
    }
    return 0.0;
}

// 16-point Gauss-Legendre nodes on (0,1), generated from the classic
// symmetric abscissae; hot path of the contour sweep.
struct GL16 {
    double x[16];
    double w[16];
    GL16()
    {
        static const double xs[8] = {
            0.09501250983763744, 0.28160355077925891, 0.45801677765722739,
            0.61787624440264375, 0.75540440835500303, 0.86563120238783174,
            0.94457502307323258, 0.98940093499164993};
        static const double ws[8] = {
            0.18945061045506850, 0.18260341504492359, 0.16915651939500254,
            0.14959598881657673, 0.12462897125553387, 0.09515851168249278,
            0.06225352393864789, 0.02715245941175409};
        for (int i = 0; i < 8; ++i) {
            x[i] = 0.5 * (1.0 - xs[7 - i]);
            w[i] = 0.5 * ws[7 - i];
            x[8 + i] = 0.5 * (1.0 + xs[i]);
            w[8 + i] = 0.5 * ws[i];
        }
    }
};

SignedLog contour_eval_log(const FoxHParams& P, double z, double tol, double a_star,
                           EvalInfo* info)
{
    static const GL16 gl;
    const auto gap = pole_gap(P);
    const double lnz = std::log(z);
    const double sigma = saddle_abscissa(P, lnz, gap.lo, gap.hi);

    // Factor out the integrand's value on the real axis (its modulus peak on
    // the contour) so the quadrature runs at O(1) scale.  Without this, an
    // answer near or below double's normal range -- e.g. exp(-715) -- would
    // be summed in gradual-underflow arithmetic whose fixed absolute quantum
    // makes a relative tolerance unreachable.  The scale is restored once,
    // at the end, where deep underflow cleanly degrades to zero.
    double shift = log_chi(P, std::complex<double>(sigma, 0.0)).real() - sigma * lnz;
    if (!std::isfinite(shift))
        shift = 0.0;

    // exp(shift) times an O(contour width) factor bounds |result|.  Once that
    // bound sits far below the smallest denormal (ln ~ -744.4; the extra
    // margin absorbs the width factor), the value is an exact zero in double
    // precision and integrating noise in search of relative accuracy would
    // never terminate.
    if (shift < -800.0) {
        if (info) {
            info->route = EvalInfo::Route::contour;
            info->residual = 0.0;
        }
        return SignedLog{-kInf, 0};
    }

    const auto integrand = [&](double t) {
        const std::complex<double> s(sigma, t);
        return std::exp(log_chi(P, s) - s * lnz - shift).real();
    };

    const double t_min = 6.0 / std::max(a_star, 0.25);
    double h = std::clamp(std::numbers::pi / (2.0 * (1.0 + std::abs(lnz))), 1e-3, 1.0);

    long evals = 0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int refine = 0; refine < 10; ++refine) {
        double sum = 0.0, max_partial = 0.0, max_panel = 0.0;
        double t = 0.0;
        int tiny_run = 0;
        while (true) {
            double panel = 0.0;
            for (int i = 0; i < 16; ++i)
                panel += gl.w[i] * integrand(t + h * gl.x[i]);
            panel *= h;
            evals += 16;
            sum += panel;
            max_partial = std::max(max_partial, std::abs(sum));
            max_panel = std::max(max_panel, std::abs(panel));
            t += h;
            // Stop once panels are negligible against the largest panel seen.
            // The threshold must scale with the integrand itself (which may
            // sit near the bottom of double range for exponentially small
            // results), and it must not depend on h: per-panel mass shrinks
            // with h, so an absolute cutoff would move the truncation point
            // on every refinement and the refinements would never agree.
            if (std::abs(panel) < 0.01 * tol * max_panel + 1e-320) {
                if (++tiny_run >= 3 && t > t_min)
                    break;
            } else {
                tiny_run = 0;
            }
            if (evals > kEvalCap)
                throw NoConvergence("contour quadrature exceeded the evaluation cap");
        }
        const double scaled = sum / std::numbers::pi;
        if (!std::isfinite(scaled))
            throw NoConvergence("contour quadrature produced a non-finite value");
        if (refine > 0 &&
            std::abs(scaled - prev) <= 0.5 * tol * std::abs(scaled) + 1e-14 * max_partial) {
            if (max_partial > 1e12 * std::max(std::abs(sum), 1e-290))
                throw NoConvergence("contour quadrature lost all significance to cancellation");
            if (info) {
                info->route = EvalInfo::Route::contour;
                info->evaluations += evals;
                info->residual =
                    std::exp(std::min(700.0, shift)) * std::abs(scaled - prev);
            }
            SignedLog out;
            if (scaled == 0.0) {
                out.sign = 0;
                out.log_abs = -kInf;
            } else {
                out.sign = scaled > 0.0 ? 1 : -1;
                out.log_abs = shift + std::log(std::abs(scaled));
            }
            return out;
        }
        prev = scaled;
        h *= 0.5;
    }
    throw NoConvergence("contour quadrature failed to converge after 10 refinements");
}

// Limit value at z == 0 from the leading ascending group (or the essential
// zero when no ascending poles exist).
SignedLog zero_limit_log(const FoxHParams& P, EvalInfo* info)
{
    if (info)
        info->route = EvalInfo::Route::limit;
    if (P.u == 0)
        return SignedLog{-kInf, 0};
    const auto lead = leading_group(P, /*left=*/true);
    if (!lead)
        return SignedLog{-kInf, 0};
    const double tol = 1e-9 * (1.0 + std::abs(lead->s0));
    if (lead->s0 < -tol)
        return SignedLog{-kInf, 0};
    if (lead->s0 > tol)
        throw Divergent("kernel diverges at z = 0 (leading exponent " +
                        std::to_string(-lead->s0) + ")");
    if (lead->order >= 2)
        throw Divergent("kernel has a logarithmic singularity at z = 0");
    return SignedLog{lead->log_abs, lead->sign};
}

// Route selection shared by eval() and eval_log().
SignedLog eval_core(const FoxHParams& P, double z, double tol, EvalInfo* info)
{
    if (z == 0.0)
        return zero_limit_log(P, info);

    const double a_star = a_star_of(P);
    const double dstar = delta_star_of(P);
    const double dk = delta_k(P);
    const bool left_ok = dstar > 1e-12 || (std::abs(dstar) <= 1e-12 && z < dk * (1.0 - 1e-12));
    const bool right_ok = dstar < -1e-12 || (std::abs(dstar) <= 1e-12 && z > dk * (1.0 + 1e-12));

    // Deep inside a series region the power series is both cheap and immune
    // to the cancellation that plagues contours when |H| << integrand scale.
    try {
        if (left_ok && z < 0.25 * dk)
            return series_eval_log(P, z, tol, /*left=*/true, info);
        if (right_ok && z > 4.0 * dk)
            return series_eval_log(P, z, tol, /*left=*/false, info);
    } catch (const NoConvergence&) {
        // fall through to the contour
        if (a_star <= 0.0)
            throw;
    }

    if (a_star > 0.0) {
        const bool slow = a_star * std::numbers::pi / 2.0 < 0.1;
        if (slow && (left_ok || right_ok)) {
            try {
                return series_eval_log(P, z, tol, left_ok, info);
            } catch (const NoConvergence&) {
            }
        }
        try {
            return contour_eval_log(P, z, tol, a_star, info);
        } catch (const NoConvergence& contour_err) {
            if (!left_ok && !right_ok)
                throw;
            try {
                return series_eval_log(P, z, tol, left_ok, info);
            } catch (const NoConvergence& series_err) {
                throw NoConvergence(std::string("contour: ") + contour_err.what() +
                                    "; series: " + series_err.what());
            }
        }
    }

    if (left_ok || right_ok)
        return series_eval_log(P, z, tol, left_ok, info);
    throw Divergent("argument lies on the boundary of the convergence sector");
}

} // namespace

// ---------------------------------------------------------------------------

void validate(const FoxHParams& P)
{
    std::ostringstream oss;
    if (!(P.kappa > 0.0) || !std::isfinite(P.kappa))
        throw BadParameter("kernel normalizer kappa must be positive");
    if (!(P.c > 0.0) || !std::isfinite(P.c))
        throw BadParameter("kernel argument scale c must be positive");
    if (P.v < 0 || P.v > static_cast<int>(P.upper.size()))
        throw BadParameter("numerator-upper count v outside [0, p]");
    if (P.u < 0 || P.u > static_cast<int>(P.lower.size()))
        throw BadParameter("numerator-lower count u outside [0, q]");
    for (const auto& [a, A] : P.upper)
        if (!(A > 0.0) || !std::isfinite(A) || !std::isfinite(a))
            throw BadParameter("upper pair scales must be positive and finite");
    for (const auto& [b, B] : P.lower)
        if (!(B > 0.0) || !std::isfinite(B) || !std::isfinite(b))
            throw BadParameter("lower pair scales must be positive and finite");
}

FoxHParams reduce(const FoxHParams& P)
{
    validate(P);
    FoxHParams r = P;
    const auto same = [](const GammaPair& x, const GammaPair& y) {
        return std::abs(x.shift - y.shift) <= 1e-14 * (1.0 + std::abs(x.shift)) &&
               std::abs(x.scale - y.scale) <= 1e-14 * (1.0 + std::abs(x.scale));
    };
    // numerator-lower vs denominator-upper
    for (int j = 0; j < r.u;) {
        bool cancelled = false;
        for (int i = r.v; i < static_cast<int>(r.upper.size()); ++i) {
            if (same(r.lower[j], r.upper[i])) {
                r.upper.erase(r.upper.begin() + i);
                r.lower.erase(r.lower.begin() + j);
                --r.u;
                cancelled = true;
                break;
            }
        }
        if (!cancelled)
            ++j;
    }
    // numerator-upper vs denominator-lower
    for (int i = 0; i < r.v;) {
        bool cancelled = false;
        for (int j = r.u; j < static_cast<int>(r.lower.size()); ++j) {
            if (same(r.upper[i], r.lower[j])) {
                r.lower.erase(r.lower.begin() + j);
                r.upper.erase(r.upper.begin() + i);
                --r.v;
                cancelled = true;
                break;
            }
        }
        if (!cancelled)
            ++i;
    }
    return r;
}

PoleGap pole_gap(const FoxHParams& P)
{
    double lo = -kInf, hi = kInf;
    for (int j = 0; j < P.u; ++j)
        lo = std::max(lo, -P.lower[j].shift / P.lower[j].scale);
    for (int i = 0; i < P.v; ++i)
        hi = std::min(hi, (1.0 - P.upper[i].shift) / P.upper[i].scale);
    if (lo >= hi - 1e-14 * (1.0 + std::abs(lo)))
        throw PoleCollision("ascending and descending poles leave no separating contour (" +
                            std::to_string(lo) + " >= " + std::to_string(hi) + ")");
    return {lo, hi};
}

std::complex<double> log_chi(const FoxHParams& P, std::complex<double> s)
{
    std::complex<double> acc = 0.0;
    for (int j = 0; j < P.u; ++j)
        acc += log_gamma(P.lower[j].shift + P.lower[j].scale * s);
    for (int i = 0; i < P.v; ++i)
        acc += log_gamma(1.0 - P.upper[i].shift - P.upper[i].scale * s);
    for (std::size_t i = P.v; i < P.upper.size(); ++i)
        acc -= log_gamma(P.upper[i].shift + P.upper[i].scale * s);
    for (std::size_t j = P.u; j < P.lower.size(); ++j)
        acc -= log_gamma(1.0 - P.lower[j].shift - P.lower[j].scale * s);
    return acc;
}

SignedLog chi_real(const FoxHParams& P, double s)
{
    SignedLog out;
    const auto mul = [&out](const SignedLogGamma& g, bool num) {
        out.log_abs += num ? g.log_abs : -g.log_abs;
        out.sign *= g.sign;
    };
    for (int j = 0; j < P.u; ++j)
        mul(log_gamma_signed(P.lower[j].shift + P.lower[j].scale * s), true);
    for (int i = 0; i < P.v; ++i)
        mul(log_gamma_signed(1.0 - P.upper[i].shift - P.upper[i].scale * s), true);
    for (std::size_t i = P.v; i < P.upper.size(); ++i) {
        const auto g = log_gamma_signed(P.upper[i].shift + P.upper[i].scale * s);
        if (g.sign == 0) { // denominator pole -> exact zero of chi
            out.sign = 0;
            out.log_abs = -kInf;
            return out;
        }
        mul(g, false);
    }
    for (std::size_t j = P.u; j < P.lower.size(); ++j) {
        const auto g = log_gamma_signed(1.0 - P.lower[j].shift - P.lower[j].scale * s);
        if (g.sign == 0) {
            out.sign = 0;
            out.log_abs = -kInf;
            return out;
        }
        mul(g, false);
    }
    return out;
}

ConvergenceInfo convergence_params(const FoxHParams& params, std::optional<double> delta)
{
    const FoxHParams P = reduce(params);
    ConvergenceInfo ci;
    ci.a_star = a_star_of(P);
    ci.delta_star = delta_star_of(P);
    ci.mu = mu_of(P);

    const auto gap = pole_gap(P); // throws PoleCollision when violated
    if (std::isfinite(gap.lo) && std::isfinite(gap.hi))
        ci.contour_abscissa = 0.5 * (gap.lo + gap.hi);
    else if (std::isfinite(gap.lo))
        ci.contour_abscissa = gap.lo + 1.0;
    else if (std::isfinite(gap.hi))
        ci.contour_abscissa = gap.hi - 1.0;
    else
        ci.contour_abscissa = 0.0;

    if (!delta) {
        ci.Delta = ci.delta_star;
        ci.rho = delta_k(P);
        ci.nu = ci.mu;
        return ci;
    }
    const double d = *delta;
    if (!(d > 0.0) || !(d < 1.0))
        throw BadParameter("transform order delta must lie in (0, 1)");
    // Constants of the order-d composed kernel
    //   chi'(s) = Gamma(s) chi(1 + d s) / Gamma(1 + d s):
    // they follow from the linear substitution without building the kernel.
    ci.Delta = 1.0 + d * (ci.delta_star - 1.0);
    ci.nu = ci.mu + ci.delta_star - 1.0;
    double log_rho = -d * std::log(d);
    for (const auto& [a, A] : P.upper)
        log_rho -= d * A * std::log(d * A);
    for (const auto& [b, B] : P.lower)
        log_rho += d * B * std::log(d * B);
    ci.rho = std::exp(log_rho);
    return ci;
}

double eval(const FoxHParams& params, double z, double tol, EvalInfo* info)
{
    const SignedLog v = eval_log(params, z, tol, info);
    if (v.sign == 0)
        return 0.0;
    if (v.log_abs > 709.7)
        throw NoConvergence("evaluation overflowed double range; use eval_log");
    return v.sign * std::exp(v.log_abs);
}

SignedLog eval_log(const FoxHParams& params, double z, double tol, EvalInfo* info)
{
    if (!(z >= 0.0) || !std::isfinite(z))
        throw BadParameter("eval argument must be finite and non-negative");
    if (!(tol > 1e-14) || !(tol < 1e-2))
        throw BadParameter("eval tolerance must lie in (1e-14, 1e-2)");
    const FoxHParams P = reduce(params);
    if (P.u == 0 && P.v == 0)
        throw Divergent("kernel has no numerator factors; it is not a pointwise function");
    (void)pole_gap(P); // PoleCollision check
    return eval_core(P, z, tol, info);
}

double mellin_moment(const FoxHParams& params, double s)
{
    const FoxHParams P = reduce(params);
    const double w = s + 1.0;
    for (int j = 0; j < P.u; ++j)
        if (P.lower[j].shift + P.lower[j].scale * w <= 0.0)
            throw StripViolation("moment order " + std::to_string(s) +
                                 " leaves the kernel's fundamental strip (lower pair)");
    for (int i = 0; i < P.v; ++i)
        if (1.0 - P.upper[i].shift - P.upper[i].scale * w <= 0.0)
            throw StripViolation("moment order " + std::to_string(s) +
                                 " leaves the kernel's fundamental strip (upper pair)");
    const SignedLog chi = chi_real(P, w);
    if (chi.sign == 0)
        return 0.0;
    return chi.sign * std::exp(std::log(P.kappa) - w * std::log(P.c) + chi.log_abs);
}

double asymptotic_eval(const FoxHParams& params, double z, AsymptoticRegime regime)
{
    if (!(z >= 0.0) || !std::isfinite(z))
        throw BadParameter("asymptotic argument must be finite and non-negative");
    const FoxHParams P = reduce(params);

    if (regime == AsymptoticRegime::near_zero) {
        if (P.u == 0)
            throw NotApplicable("no ascending poles: the kernel vanishes to all orders at 0");
        const auto lead = leading_group(P, /*left=*/true);
        if (!lead || lead->order >= 2)
            throw NotApplicable("leading ascending pole is not simple");
        if (z == 0.0) {
            const double tol0 = 1e-12 * (1.0 + std::abs(lead->s0));
            if (lead->s0 > tol0)
                throw Divergent("leading term diverges at z = 0");
            return std::abs(lead->s0) <= tol0 ? lead->sign * std::exp(lead->log_abs) : 0.0;
        }
        return lead->sign * std::exp(lead->log_abs - lead->s0 * std::log(z));
    }

    // at_infinity
    if (P.v > 0) {
        const auto lead = leading_group(P, /*left=*/false);
        if (!lead || lead->order >= 2)
            throw NotApplicable("leading descending pole is not simple");
        if (z == 0.0)
            throw BadParameter("large-argument form requested at z = 0 with algebraic decay");
        return -lead->sign * std::exp(lead->log_abs - lead->s0 * std::log(z));
    }

    const int q = static_cast<int>(P.lower.size());
    const int p = static_cast<int>(P.upper.size());
    if (P.u != q)
        throw NotApplicable("exponential large-argument form requires all lower pairs in the numerator");
    const double Delta = delta_star_of(P);
    if (!(Delta > 0.0))
        throw NotApplicable("exponential large-argument form requires positive delta_star");
    const double dk = delta_k(P);
    const double mu = mu_of(P);
    // H(z) ~ C * y^{mu + 1/2} * exp(-Delta y), y = (z / delta_K)^{1/Delta},
    // C = (2 pi)^{(q-p-1)/2} Delta^{-1/2} prod B_j^{b_j - 1/2} prod A_i^{1/2 - a_i}.
    double log_c = 0.5 * (q - p - 1) * std::log(2.0 * std::numbers::pi) - 0.5 * std::log(Delta);
    for (const auto& [b, B] : P.lower)
        log_c += (b - 0.5) * std::log(B);
    for (const auto& [a, A] : P.upper)
        log_c += (0.5 - a) * std::log(A);
    if (z == 0.0)
        return (mu + 0.5 > 0.0) ? 0.0
                                : throw NotApplicable("exponential form has no finite z = 0 limit");
    const double y = std::pow(z / dk, 1.0 / Delta);
    return std::exp(log_c + (mu + 0.5) * std::log(y) - Delta * y);
}

} // namespace udn
