#ifndef CMC_SPECIAL_HPP
#define CMC_SPECIAL_HPP

#include <cmath>
#include <limits>
#include <string>

#include "cmc/errors.hpp"

namespace cmc {

namespace detail {

// Series expansion of P(s,x), converges fastest for x < s + 1.
inline double gamma_p_series(double s, double x) {
    double ap = s;
    double term = 1.0 / s;
    double sum = term;
    for (int k = 0; k < 1000; ++k) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Modified Lentz continued fraction for Q(s,x), converges fastest for x >= s + 1.
inline double gamma_q_contfrac(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 1000; ++k) {
        const double an = -static_cast<double>(k) * (static_cast<double>(k) - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

} // namespace detail

/// Lower regularized incomplete gamma function P(s, x), s > 0, x >= 0.
/// Series for x < s + 1, continued fraction otherwise; absolute error < 1e-12.
inline double regularized_gamma_p(double s, double x) {
    if (!(s > 0.0)) throw Error("regularized_gamma_p: s must be positive");
    if (x < 0.0) throw Error("regularized_gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return detail::gamma_p_series(s, x);
    const double q = detail::gamma_q_contfrac(s, x);
    return 1.0 - q;
}

/// CDF of the chi-square distribution with df degrees of freedom.
inline double chisq_cdf(double q, int df) {
    if (df < 1) throw Error("chisq_cdf: df must be >= 1");
    if (q <= 0.0) return 0.0;
    return regularized_gamma_p(0.5 * df, 0.5 * q);
}

/// Log density of the chi-square distribution (used by the quantile Newton step).
inline double chisq_log_pdf(double q, int df) {
    const double half = 0.5 * df;
    return (half - 1.0) * std::log(q) - 0.5 * q - half * std::log(2.0) - std::lgamma(half);
}

namespace detail {

// Inverse standard normal CDF, Acklam's rational approximation (~1e-9 absolute),
// only used to seed the chi-square quantile iteration.
inline double normal_quantile_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double u = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
               ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    if (p > 1.0 - plow) {
        const double u = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
               ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
    }
    const double u = p - 0.5;
    const double r = u * u;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace detail

/// Quantile of the chi-square distribution: the q with chisq_cdf(q, df) = prob,
/// accurate to 1e-10 in CDF terms. Wilson-Hilferty start, safeguarded Newton,
/// bisection on stagnation.
inline double chisq_quantile(double prob, int df) {
    if (!(prob > 0.0 && prob < 1.0)) {
        throw Error("chisq_quantile: prob must lie in (0, 1)");
    }
    if (df < 1) throw Error("chisq_quantile: df must be >= 1");

    const double z = detail::normal_quantile_approx(prob);
    const double f = 2.0 / (9.0 * df);
    const double wh = 1.0 - f + z * std::sqrt(f);
    double q = df * wh * wh * wh;
    if (!(q > 0.0)) q = 1e-8;

    // Bracket the root.
    double lo = 0.0;
    double hi = std::max(q, 1.0);
    while (chisq_cdf(hi, df) < prob) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e8) break;
    }
    if (q <= lo || q >= hi) q = 0.5 * (lo + hi);

    for (int it = 0; it < 100; ++it) {
        const double err = chisq_cdf(q, df) - prob;
        if (err > 0.0) hi = q; else lo = q;
        if (std::abs(err) < 1e-13) break;
        const double step = err * std::exp(-chisq_log_pdf(q, df));
        double next = q - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // Newton left the bracket
        if (std::abs(next - q) < 1e-14 * (1.0 + q)) { q = next; break; }
        q = next;
    }
    return q;
}

} // namespace cmc

#endif // CMC_SPECIAL_HPP
