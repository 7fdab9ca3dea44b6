#include <tmreach/interval.hpp>

#include <numbers>
#include <ostream>
#include <string>

namespace tmreach
{

namespace detail
{

void throw_non_finite(const char *op)
{
    throw DomainError(std::string(op) + ": result is not finite");
}

} // namespace detail

namespace
{

using detail::lower_abs;
using detail::upper_abs;

// Library transcendental results are within one ulp; two ulps outward keeps
// the enclosure below the relative inflation kRelEps.
double down_ulps(double x) noexcept
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::nextafter(std::nextafter(x, -inf), -inf);
}
double up_ulps(double x) noexcept
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::nextafter(std::nextafter(x, inf), inf);
}

Interval checked(double lo, double hi, const char *op)
{
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        detail::throw_non_finite(op);
    }
    return Interval(lo, hi);
}

// x^k by repeated squaring; the result carries at most 2*log2(k) roundings.
double ipow(double x, unsigned k)
{
    double r = 1;
    while (k != 0) {
        if (k & 1u) {
            r *= x;
        }
        x *= x;
        k >>= 1;
    }
    return r;
}

double pow_down(double x, unsigned k)
{
    const double r = ipow(x, k);
    return r - (k * kRelEps * std::fabs(r) + std::numeric_limits<double>::denorm_min());
}

double pow_up(double x, unsigned k)
{
    const double r = ipow(x, k);
    return r + (k * kRelEps * std::fabs(r) + std::numeric_limits<double>::denorm_min());
}

// True if some phase + 2*pi*k lies in [lo, hi], with a tolerance far larger
// than the error of evaluating the candidate. False positives only widen.
bool hits_phase(const Interval &a, double phase)
{
    constexpr double two_pi = 2 * std::numbers::pi;
    const double k0 = std::floor((a.lo() - phase) / two_pi);
    for (double k = k0 - 1; k <= k0 + 2; k += 1) {
        const double x = phase + two_pi * k;
        const double slack = 1e-12 * (1 + std::fabs(x));
        if (x >= a.lo() - slack && x <= a.hi() + slack) {
            return true;
        }
    }
    return false;
}

template <typename F>
Interval trig(const Interval &a, F f, double max_phase, double min_phase)
{
    if (a.hi() - a.lo() >= 2 * std::numbers::pi) {
        return Interval(-1, 1);
    }
    const double fl = f(a.lo());
    const double fh = f(a.hi());
    double lo = down_ulps(std::min(fl, fh));
    double hi = up_ulps(std::max(fl, fh));
    if (hits_phase(a, max_phase)) {
        hi = 1;
    }
    if (hits_phase(a, min_phase)) {
        lo = -1;
    }
    return Interval(std::max(lo, -1.0), std::min(hi, 1.0));
}

} // namespace

Interval operator/(const Interval &a, const Interval &b)
{
    if (b.contains_zero()) {
        throw DomainError("Interval division: divisor contains zero");
    }
    const double q1 = a.lo() / b.lo();
    const double q2 = a.lo() / b.hi();
    const double q3 = a.hi() / b.lo();
    const double q4 = a.hi() / b.hi();
    return checked(lower_abs(std::min(std::min(q1, q2), std::min(q3, q4))),
                   upper_abs(std::max(std::max(q1, q2), std::max(q3, q4))), "Interval division");
}

Interval pow(const Interval &a, unsigned k)
{
    if (k == 0) {
        return Interval(1);
    }
    if (k == 1) {
        return a;
    }
    if (k % 2 == 1) {
        return checked(pow_down(a.lo(), k), pow_up(a.hi(), k), "Interval pow");
    }
    if (a.contains_zero()) {
        return checked(0, pow_up(a.mag(), k), "Interval pow");
    }
    return checked(std::max(0.0, pow_down(a.mig(), k)), pow_up(a.mag(), k), "Interval pow");
}

Interval sqr(const Interval &a) { return pow(a, 2); }

Interval abs(const Interval &a) { return Interval(a.mig(), a.mag()); }

Interval sqrt(const Interval &a)
{
    if (a.lo() < 0) {
        throw DomainError("sqrt: argument range extends below zero");
    }
    return Interval(std::max(0.0, down_ulps(std::sqrt(a.lo()))), up_ulps(std::sqrt(a.hi())));
}

Interval exp(const Interval &a)
{
    return checked(std::max(0.0, down_ulps(std::exp(a.lo()))), up_ulps(std::exp(a.hi())), "exp");
}

Interval log(const Interval &a)
{
    if (a.lo() <= 0) {
        throw DomainError("log: argument range is not strictly positive");
    }
    return checked(down_ulps(std::log(a.lo())), up_ulps(std::log(a.hi())), "log");
}

Interval sin(const Interval &a)
{
    return trig(a, [](double x) { return std::sin(x); }, std::numbers::pi / 2, -std::numbers::pi / 2);
}

Interval cos(const Interval &a)
{
    return trig(a, [](double x) { return std::cos(x); }, 0.0, std::numbers::pi);
}

Interval tanh(const Interval &a)
{
    return Interval(std::max(-1.0, lower_abs(std::tanh(a.lo()))), std::min(1.0, upper_abs(std::tanh(a.hi()))));
}

double sigmoid(double x)
{
    if (x >= 0) {
        return 1 / (1 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1 + e);
}

Interval sigmoid(const Interval &a)
{
    return Interval(std::max(0.0, lower_abs(sigmoid(a.lo()))),
                    std::min(1.0, upper_abs(sigmoid(a.hi()))));
}

bool Box::contains(const Box &o) const
{
    if (o.size() != size()) {
        throw ShapeError("Box::contains: dimension mismatch");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (!dims_[i].contains(o[i])) {
            return false;
        }
    }
    return true;
}

std::ostream &operator<<(std::ostream &os, const Interval &a)
{
    return os << '[' << a.lo() << ", " << a.hi() << ']';
}

} // namespace tmreach
