#include "partpower/math_kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "partpower/errors.hpp"

namespace partpower {

Probability::Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << "probability must lie in [0, 1], got " << value;
        throw DomainError(msg.str());
    }
}

Probability Probability::complement() const noexcept {
    Probability p(0.0);
    p.value_ = 1.0 - value_;
    return p;
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double normal_pdf(double z) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

namespace {

// AS241 PPND16 for p <= 0.5 (returns a value <= 0).
double ppnd16_lower(double p) {
    constexpr double split1 = 0.425;
    constexpr double split2 = 5.0;
    constexpr double const1 = 0.180625;
    constexpr double const2 = 1.6;

    // Central region, |q| <= 0.425.
    constexpr double a0 = 3.3871328727963666080e0;
    constexpr double a1 = 1.3314166789178437745e+2;
    constexpr double a2 = 1.9715909503065514427e+3;
    constexpr double a3 = 1.3731693765509461125e+4;
    constexpr double a4 = 4.5921953931549871457e+4;
    constexpr double a5 = 6.7265770927008700853e+4;
    constexpr double a6 = 3.3430575583588128105e+4;
    constexpr double a7 = 2.5090809287301226727e+3;
    constexpr double b1 = 4.2313330701600911252e+1;
    constexpr double b2 = 6.8718700749205790830e+2;
    constexpr double b3 = 5.3941960214247511077e+3;
    constexpr double b4 = 2.1213794301586595867e+4;
    constexpr double b5 = 3.9307895800092710610e+4;
    constexpr double b6 = 2.8729085735721942674e+4;
    constexpr double b7 = 5.2264952788528545610e+3;
    // Intermediate tail.
    constexpr double c0 = 1.42343711074968357734e0;
    constexpr double c1 = 4.63033784615654529590e0;
    constexpr double c2 = 5.76949722146069140550e0;
    constexpr double c3 = 3.64784832476320460504e0;
    constexpr double c4 = 1.27045825245236838258e0;
    constexpr double c5 = 2.41780725177450611770e-1;
    constexpr double c6 = 2.27238449892691845833e-2;
    constexpr double c7 = 7.74545014278341407640e-4;
    constexpr double d1 = 2.05319162663775882187e0;
    constexpr double d2 = 1.67638483018380384940e0;
    constexpr double d3 = 6.89767334985100004550e-1;
    constexpr double d4 = 1.48103976427480074590e-1;
    constexpr double d5 = 1.51986665636164571966e-2;
    constexpr double d6 = 5.47593808499534494600e-4;
    constexpr double d7 = 1.05075007164441684324e-9;
    // Far tail.
    constexpr double e0 = 6.65790464350110377720e0;
    constexpr double e1 = 5.46378491116411436990e0;
    constexpr double e2 = 1.78482653991729133580e0;
    constexpr double e3 = 2.96560571828504891230e-1;
    constexpr double e4 = 2.65321895265761230930e-2;
    constexpr double e5 = 1.24266094738807843860e-3;
    constexpr double e6 = 2.71155556874348757815e-5;
    constexpr double e7 = 2.01033439929228813265e-7;
    constexpr double f1 = 5.99832206555887937690e-1;
    constexpr double f2 = 1.36929880922735805310e-1;
    constexpr double f3 = 1.48753612908506148525e-2;
    constexpr double f4 = 7.86869131145613259100e-4;
    constexpr double f5 = 1.84631831751005468180e-5;
    constexpr double f6 = 1.42151175831644588870e-7;
    constexpr double f7 = 2.04426310338993978564e-15;

    const double q = p - 0.5;
    if (std::fabs(q) <= split1) {
        const double r = const1 - q * q;
        return q * (((((((a7 * r + a6) * r + a5) * r + a4) * r + a3) * r + a2) * r + a1) * r + a0) /
               (((((((b7 * r + b6) * r + b5) * r + b4) * r + b3) * r + b2) * r + b1) * r + 1.0);
    }
    double r = std::sqrt(-std::log(p));
    double z;
    if (r <= split2) {
        r -= const2;
        z = (((((((c7 * r + c6) * r + c5) * r + c4) * r + c3) * r + c2) * r + c1) * r + c0) /
            (((((((d7 * r + d6) * r + d5) * r + d4) * r + d3) * r + d2) * r + d1) * r + 1.0);
    } else {
        r -= split2;
        z = (((((((e7 * r + e6) * r + e5) * r + e4) * r + e3) * r + e2) * r + e1) * r + e0) /
            (((((((f7 * r + f6) * r + f5) * r + f4) * r + f3) * r + f2) * r + f1) * r + 1.0);
    }
    return -z;
}

double quantile_lower(double p) {
    double z = ppnd16_lower(p);
    // One Newton step; Phi(z) for z <= 0 keeps full relative accuracy.
    const double density = normal_pdf(z);
    if (density > 0.0) {
        z -= (normal_cdf(z) - p) / density;
    }
    return z;
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "normal_quantile requires 0 < p < 1, got " << p;
        throw DomainError(msg.str());
    }
    if (p <= 0.5) {
        return quantile_lower(p);
    }
    return -quantile_lower(1.0 - p);
}

double normal_quantile(Probability p) { return normal_quantile(p.value()); }

double bennett_h(double s) {
    if (!(s >= 0.0)) {
        std::ostringstream msg;
        msg << "bennett_h requires s >= 0, got " << s;
        throw DomainError(msg.str());
    }
    if (std::isinf(s)) {
        return s;
    }
    // log1p keeps precision for small s where h(s) ~ s^2/2.
    const double l = std::log1p(s);
    if (s < 1e-4) {
        // (1+s)log1p(s) - s cancels; series s^2/2 - s^3/6 + s^4/12 - s^5/20.
        return s * s * (0.5 - s * (1.0 / 6.0 - s * (1.0 / 12.0 - s / 20.0)));
    }
    return (1.0 + s) * l - s;
}

double bisect(const std::function<double(double)>& f, const BracketedRoot& bracket) {
    double lo = bracket.lo;
    double hi = bracket.hi;
    if (!(lo < hi) || !(bracket.tolerance > 0.0) || bracket.max_iterations <= 0) {
        throw BracketError("bisect: malformed bracket (need lo < hi, tolerance > 0, max_iterations > 0)");
    }
    double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if (std::signbit(f_lo) == std::signbit(f_hi) || std::isnan(f_lo) || std::isnan(f_hi)) {
        std::ostringstream msg;
        msg << "bisect: no sign change on [" << lo << ", " << hi << "]";
        throw BracketError(msg.str());
    }
    for (int iter = 0; iter < bracket.max_iterations; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (0.5 * (hi - lo) <= bracket.tolerance) {
            return mid;
        }
        const double f_mid = f(mid);
        if (f_mid == 0.0) {
            return mid;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if (0.5 * (hi - lo) <= bracket.tolerance) {
        return lo + 0.5 * (hi - lo);
    }
    std::ostringstream msg;
    msg << "bisect: tolerance " << bracket.tolerance << " not reached after " << bracket.max_iterations
        << " iterations";
    throw ConvergenceError(msg.str());
}

}  // namespace partpower
