#ifndef TMREACH_INTERVAL_HPP
#define TMREACH_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include <tmreach/error.hpp>

namespace tmreach
{

// Relative outward inflation applied after every floating-point interval
// operation. Results of round-to-nearest operations are within half an ulp,
// and glibc's transcendental functions within one ulp, of the exact value,
// so four machine epsilons cover both with margin.
inline constexpr double kRelEps = 4 * std::numeric_limits<double>::epsilon();

namespace detail
{

inline double lower_rel(double x) noexcept { return x - kRelEps * std::fabs(x); }
inline double upper_rel(double x) noexcept { return x + kRelEps * std::fabs(x); }

// Products and quotients may underflow, which loses up to half of the smallest
// subnormal in absolute terms.
inline double lower_abs(double x) noexcept
{
    return x - (kRelEps * std::fabs(x) + std::numeric_limits<double>::denorm_min());
}
inline double upper_abs(double x) noexcept
{
    return x + (kRelEps * std::fabs(x) + std::numeric_limits<double>::denorm_min());
}

[[noreturn]] void throw_non_finite(const char *op);

} // namespace detail

// Closed interval [lo, hi] with finite endpoints and lo <= hi. Empty results
// (e.g. of an intersection) are expressed with std::optional<Interval>.
class Interval
{
public:
    constexpr Interval() noexcept = default;
    explicit Interval(double v) : Interval(v, v) {}
    Interval(double lo, double hi) : lo_(lo), hi_(hi)
    {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            detail::throw_non_finite("Interval");
        }
        if (lo > hi) {
            throw DomainError("Interval: lower endpoint exceeds upper endpoint");
        }
    }

    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double mid() const noexcept
    {
        const double m = 0.5 * lo_ + 0.5 * hi_;
        return std::clamp(m, lo_, hi_);
    }
    // Upper bounds on the width and radius (rounded up).
    double width() const noexcept { return detail::upper_rel(hi_ - lo_); }
    double radius() const noexcept { return detail::upper_rel(std::max(hi_ - mid(), mid() - lo_)); }
    // Largest absolute value of any member.
    double mag() const noexcept { return std::max(std::fabs(lo_), std::fabs(hi_)); }
    // Smallest absolute value of any member.
    double mig() const noexcept
    {
        if (lo_ <= 0 && hi_ >= 0) {
            return 0;
        }
        return std::min(std::fabs(lo_), std::fabs(hi_));
    }

    bool is_point() const noexcept { return lo_ == hi_; }
    bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
    bool contains(const Interval &o) const noexcept { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const noexcept { return lo_ <= 0 && hi_ >= 0; }
    bool intersects(const Interval &o) const noexcept { return lo_ <= o.hi_ && o.lo_ <= hi_; }

    Interval &operator+=(const Interval &o);
    Interval &operator-=(const Interval &o);
    Interval &operator*=(const Interval &o);

    friend bool operator==(const Interval &, const Interval &) = default;

private:
    double lo_ = 0;
    double hi_ = 0;
};

std::ostream &operator<<(std::ostream &, const Interval &);

// Smallest interval containing both arguments.
inline Interval hull(const Interval &a, const Interval &b)
{
    return Interval(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

inline std::optional<Interval> intersect(const Interval &a, const Interval &b)
{
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) {
        return std::nullopt;
    }
    return Interval(lo, hi);
}

// Symmetric interval [-r, r] for r >= 0.
inline Interval symmetric(double r) { return Interval(-std::fabs(r), std::fabs(r)); }

inline Interval operator-(const Interval &a) { return Interval(-a.hi(), -a.lo()); }

inline Interval operator+(const Interval &a, const Interval &b)
{
    if (b.lo() == 0 && b.hi() == 0) {
        return a;
    }
    if (a.lo() == 0 && a.hi() == 0) {
        return b;
    }
    return Interval(detail::lower_rel(a.lo() + b.lo()), detail::upper_rel(a.hi() + b.hi()));
}

inline Interval operator-(const Interval &a, const Interval &b)
{
    if (b.lo() == 0 && b.hi() == 0) {
        return a;
    }
    return Interval(detail::lower_rel(a.lo() - b.hi()), detail::upper_rel(a.hi() - b.lo()));
}

inline Interval operator*(const Interval &a, const Interval &b)
{
    const double p1 = a.lo() * b.lo();
    const double p2 = a.lo() * b.hi();
    const double p3 = a.hi() * b.lo();
    const double p4 = a.hi() * b.hi();
    double lo = detail::lower_abs(std::min(std::min(p1, p2), std::min(p3, p4)));
    const double hi = detail::upper_abs(std::max(std::max(p1, p2), std::max(p3, p4)));
    if (a.lo() >= 0 && b.lo() >= 0) {
        lo = std::max(lo, 0.0);
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        detail::throw_non_finite("Interval multiplication");
    }
    return Interval(lo, hi);
}

Interval operator/(const Interval &a, const Interval &b);

inline Interval operator+(const Interval &a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval &b) { return Interval(a) + b; }
inline Interval operator-(const Interval &a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval &b) { return Interval(a) - b; }
inline Interval operator*(const Interval &a, double b) { return a * Interval(b); }
inline Interval operator*(double a, const Interval &b) { return Interval(a) * b; }
inline Interval operator/(const Interval &a, double b) { return a / Interval(b); }
inline Interval operator/(double a, const Interval &b) { return Interval(a) / b; }

inline Interval &Interval::operator+=(const Interval &o) { return *this = *this + o; }
inline Interval &Interval::operator-=(const Interval &o) { return *this = *this - o; }
inline Interval &Interval::operator*=(const Interval &o) { return *this = *this * o; }

// Natural integer power; even powers of sign-straddling intervals start at 0.
Interval pow(const Interval &a, unsigned k);

Interval abs(const Interval &a);
Interval sqr(const Interval &a);
Interval sqrt(const Interval &a);
Interval exp(const Interval &a);
Interval log(const Interval &a);
Interval sin(const Interval &a);
Interval cos(const Interval &a);
Interval tanh(const Interval &a);
Interval sigmoid(const Interval &a);

// Logistic function 1 / (1 + exp(-x)), evaluated without overflow.
double sigmoid(double x);

// Axis-aligned box: a fixed-dimension sequence of intervals.
class Box
{
public:
    Box() = default;
    explicit Box(std::size_t n) : dims_(n) {}
    explicit Box(std::vector<Interval> dims) : dims_(std::move(dims)) {}
    Box(std::initializer_list<Interval> dims) : dims_(dims) {}

    std::size_t size() const noexcept { return dims_.size(); }
    const Interval &operator[](std::size_t i) const { return dims_[i]; }
    Interval &operator[](std::size_t i) { return dims_[i]; }
    auto begin() const noexcept { return dims_.begin(); }
    auto end() const noexcept { return dims_.end(); }
    const std::vector<Interval> &intervals() const noexcept { return dims_; }

    bool contains(const Box &o) const;

    friend bool operator==(const Box &, const Box &) = default;

private:
    std::vector<Interval> dims_;
};

} // namespace tmreach

#endif
