#include <tmreach/tm_functions.hpp>

#include <cmath>

#include <tmreach/error.hpp>

namespace tmreach
{

namespace
{

Interval inv_factorial(unsigned n)
{
    Interval r(1);
    for (unsigned i = 2; i <= n; ++i) {
        r = r / Interval(double(i));
    }
    return r;
}

std::vector<double> derivative_poly(unsigned n, const std::vector<double> &factor)
{
    std::vector<double> d{0, 1};
    for (unsigned step = 0; step < n; ++step) {
        std::vector<double> dd(d.size() > 1 ? d.size() - 1 : 1, 0.0);
        for (std::size_t i = 1; i < d.size(); ++i) {
            dd[i - 1] = double(i) * d[i];
        }
        std::vector<double> next(dd.size() + factor.size() - 1, 0.0);
        for (std::size_t i = 0; i < dd.size(); ++i) {
            for (std::size_t j = 0; j < factor.size(); ++j) {
                next[i + j] += dd[i] * factor[j];
            }
        }
        d = std::move(next);
    }
    return d;
}

Interval interval_horner(const std::vector<double> &coeffs, const Interval &y)
{
    Interval acc(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = acc * y + coeffs[i];
    }
    return acc;
}

// sin^(n) = sin(x + n pi / 2); cos^(n) = sin^(n+1).
Interval sin_derivative(const Interval &x, unsigned n)
{
    switch (n % 4) {
    case 0:
        return sin(x);
    case 1:
        return cos(x);
    case 2:
        return -sin(x);
    default:
        return -cos(x);
    }
}

void check_domain(ElementaryFunction f, const Interval &x)
{
    switch (f) {
    case ElementaryFunction::recip:
        if (x.contains_zero()) {
            throw DomainError("reciprocal: argument enclosure contains 0");
        }
        break;
    case ElementaryFunction::sqrt:
        if (x.lo() <= 0) {
            throw DomainError("sqrt: argument enclosure is not strictly positive");
        }
        break;
    case ElementaryFunction::log:
        if (x.lo() <= 0) {
            throw DomainError("log: argument enclosure is not strictly positive");
        }
        break;
    default:
        break;
    }
}

// f^(n)(x) / n! on an interval, valid for any n.
Interval scaled_derivative(ElementaryFunction f, const Interval &x, unsigned n)
{
    switch (f) {
    case ElementaryFunction::exp:
        return exp(x) * inv_factorial(n);
    case ElementaryFunction::recip: {
        const Interval r = pow(Interval(1) / x, n + 1);
        return n % 2 == 0 ? r : -r;
    }
    case ElementaryFunction::sqrt: {
        // binom(1/2, n) * x^(1/2 - n)
        Interval binom(1);
        for (unsigned i = 0; i < n; ++i) {
            binom = binom * Interval(0.5 - double(i)) / Interval(double(i + 1));
        }
        return binom * sqrt(x) / pow(x, n);
    }
    case ElementaryFunction::log: {
        if (n == 0) {
            return log(x);
        }
        const Interval r = pow(Interval(1) / x, n) / Interval(double(n));
        return n % 2 == 1 ? r : -r;
    }
    case ElementaryFunction::sin:
        return sin_derivative(x, n) * inv_factorial(n);
    case ElementaryFunction::cos:
        return sin_derivative(x, n + 1) * inv_factorial(n);
    case ElementaryFunction::tanh:
        return interval_horner(tanh_derivative_poly(n), tanh(x)) * inv_factorial(n);
    case ElementaryFunction::sigmoid:
        return interval_horner(sigmoid_derivative_poly(n), sigmoid(x)) * inv_factorial(n);
    }
    throw Error("unknown elementary function");
}

} // namespace

std::vector<double> tanh_derivative_poly(unsigned n) { return derivative_poly(n, {1, 0, -1}); }

std::vector<double> sigmoid_derivative_poly(unsigned n) { return derivative_poly(n, {0, 1, -1}); }

std::vector<Interval> taylor_coefficients(ElementaryFunction f, double c, unsigned k)
{
    const Interval x(c);
    check_domain(f, x);
    std::vector<Interval> out;
    out.reserve(k + 1);
    for (unsigned i = 0; i <= k; ++i) {
        out.push_back(scaled_derivative(f, x, i));
    }
    return out;
}

Interval derivative_bound(ElementaryFunction f, const Interval &x, unsigned n)
{
    check_domain(f, x);
    return scaled_derivative(f, x, n);
}

TaylorModel tm_apply(ElementaryFunction f, const TaylorModel &t)
{
    const Interval x = tm_enclosure(t);
    check_domain(f, x);
    const unsigned k = t.order();
    const double c = x.mid();
    const std::vector<Interval> a = taylor_coefficients(f, c, k);

    const TaylorModel s = tm_add_constant(t, -c);
    Interval srange = tm_enclosure(s);
    if (auto tight = intersect(srange, x - c)) {
        srange = *tight;
    }

    std::vector<double> mids(a.size());
    Interval extra(0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        mids[i] = a[i].mid();
        const Interval dev = a[i] - mids[i];
        extra += dev * pow(srange, unsigned(i));
    }
    extra += derivative_bound(f, x, k + 1) * pow(srange, k + 1);

    const TaylorModel out = poly_compose(mids, s, k);
    return out.with_remainder(out.remainder() + extra);
}

TaylorModel tm_div(const TaylorModel &a, const TaylorModel &b) { return a * tm_recip(b); }

TaylorModel tm_pow(const TaylorModel &t, int n)
{
    if (n < 0) {
        return tm_recip(tm_pow(t, -n));
    }
    TaylorModel result = TaylorModel::constant(1.0, t.domain(), t.order());
    TaylorModel base = t;
    bool first = true;
    for (unsigned e = unsigned(n); e != 0; e >>= 1) {
        if (e & 1u) {
            result = first ? base : result * base;
            first = false;
        }
        if (e > 1) {
            base = base * base;
        }
    }
    return result;
}

} // namespace tmreach
