#include <tmreach/activation.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <tmreach/error.hpp>
#include <tmreach/tm_functions.hpp>

namespace tmreach
{

namespace
{

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Splits interval coefficients into midpoints plus the bound of the dropped
// radii over s in [-1, 1].
LocalPolynomial from_intervals(double center, double radius, const std::vector<Interval> &c)
{
    LocalPolynomial p;
    p.center = center;
    p.radius = radius;
    p.coeffs.reserve(c.size());
    Interval err(0);
    for (const Interval &ci : c) {
        const double m = ci.mid();
        p.coeffs.push_back(m);
        err += (ci - m);
    }
    p.coeff_error = err.mag();
    return p;
}

double abs_sum(const std::vector<double> &c)
{
    double s = 0;
    for (double x : c) {
        s += std::fabs(x);
    }
    return s;
}

// (1 + s)^i (1 - s)^(k - i) as dense integer coefficients.
std::vector<double> bernstein_basis(unsigned k, unsigned i)
{
    std::vector<double> out{1};
    auto times = [&](double sign) {
        std::vector<double> next(out.size() + 1, 0.0);
        for (std::size_t j = 0; j < out.size(); ++j) {
            next[j] += out[j];
            next[j + 1] += sign * out[j];
        }
        out = std::move(next);
    };
    for (unsigned j = 0; j < i; ++j) {
        times(1);
    }
    for (unsigned j = i; j < k; ++j) {
        times(-1);
    }
    return out;
}

double binomial(unsigned n, unsigned r)
{
    double b = 1;
    for (unsigned j = 1; j <= r; ++j) {
        b = b * double(n - r + j) / double(j);
    }
    return std::round(b);
}

// A double with an upper bound on its distance to the exact real value.
// Error terms come from error-free transformations, so exact arithmetic
// keeps the bound at zero.
struct Tracked {
    double v = 0;
    double e = 0;
};

double round_up(double x) { return x * (1 + 4 * kEps); }

Tracked t_add(Tracked x, Tracked y)
{
    const double s = x.v + y.v;
    const double bb = s - x.v;
    const double err = (x.v - (s - bb)) + (y.v - bb);
    return {s, round_up(x.e + y.e + std::fabs(err))};
}

Tracked t_mul(Tracked x, Tracked y)
{
    const double p = x.v * y.v;
    const double err = std::fma(x.v, y.v, -p);
    double bound = std::fabs(x.v) * y.e + std::fabs(y.v) * x.e + x.e * y.e + std::fabs(err);
    if (p != 0 && std::fabs(p) < std::numeric_limits<double>::min()) {
        bound += std::numeric_limits<double>::denorm_min();
    }
    return {p, round_up(bound)};
}

Tracked t_div(Tracked x, double d)
{
    const double q = x.v / d;
    const double r = std::fma(-q, d, x.v);
    return {q, round_up((x.e + std::fabs(r)) / std::fabs(d))};
}

// The approximation interval [c - h, c + h] with double c and h covering the range.
std::pair<double, double> normalization(const Interval &range)
{
    const double c = range.mid();
    double h = std::max(range.hi() - c, c - range.lo());
    while (c + h < range.hi() || c - h > range.lo()) {
        h = std::nextafter(h, INFINITY);
    }
    return {c, h};
}

std::vector<Tracked> bernstein_nodes(ActivationKind kind, double c, double h, unsigned k)
{
    std::vector<Tracked> f;
    f.reserve(k + 1);
    for (unsigned i = 0; i <= k; ++i) {
        const Tracked t = t_div(Tracked{double(2 * int(i) - int(k)), 0}, double(k));
        const Tracked z = t_add(t_mul(Tracked{h, 0}, t), Tracked{c, 0});
        switch (kind) {
        case ActivationKind::relu:
            f.push_back({z.v > 0 ? z.v : 0.0, z.e});
            break;
        case ActivationKind::affine:
            f.push_back(z);
            break;
        default: {
            const double v = activate(kind, z.v);
            const double l = activation_lipschitz(kind, Interval(z.v - z.e, z.v + z.e));
            f.push_back({v, round_up(l * z.e + 4 * kEps * std::fabs(v) + std::numeric_limits<double>::denorm_min())});
        }
        }
    }
    return f;
}

LocalPolynomial constant_poly(const Interval &v)
{
    LocalPolynomial p = from_intervals(0, 0, {v});
    return p;
}

LocalPolynomial identity_poly() { return LocalPolynomial{0, 1, {0, 1}, 0}; }
LocalPolynomial zero_poly() { return LocalPolynomial{0, 1, {0}, 0}; }

bool is_identity(const LocalPolynomial &p)
{
    return p.center == 0 && p.radius == 1 && p.coeffs.size() == 2 && p.coeffs[0] == 0 && p.coeffs[1] == 1 &&
           p.coeff_error == 0;
}

double sampled_error(ActivationKind kind, const LocalPolynomial &p, const Interval &range, unsigned m)
{
    const double a = range.lo();
    const double step = (range.hi() - a) / double(m);
    double worst = 0;
    for (unsigned j = 0; j < m; ++j) {
        const double z = a + (double(j) + 0.5) * step;
        worst = std::max(worst, std::fabs(p(z) - activate(kind, z)));
    }
    return worst;
}

// Floating-point error of the sampled evaluation: Horner in s, the map from
// z to s, and the activation itself.
double sampling_slack(const LocalPolynomial &p, const Interval &range, double lipschitz)
{
    const double k = double(p.degree());
    return 8 * (k + 4) * kEps * (abs_sum(p.coeffs) + 1 + lipschitz * (range.mag() + std::fabs(p.center) + p.radius));
}

} // namespace

std::string activation_name(ActivationKind k)
{
    switch (k) {
    case ActivationKind::relu:
        return "ReLU";
    case ActivationKind::sigmoid:
        return "sigmoid";
    case ActivationKind::tanh:
        return "tanh";
    case ActivationKind::affine:
        return "affine";
    }
    return "?";
}

ActivationKind parse_activation(std::string_view name)
{
    for (auto k : {ActivationKind::relu, ActivationKind::sigmoid, ActivationKind::tanh, ActivationKind::affine}) {
        if (name == activation_name(k)) {
            return k;
        }
    }
    throw ParseError("unknown activation '" + std::string(name) + "'", 0);
}

double activate(ActivationKind k, double z)
{
    switch (k) {
    case ActivationKind::relu:
        return z > 0 ? z : 0.0;
    case ActivationKind::sigmoid:
        return sigmoid(z);
    case ActivationKind::tanh:
        return std::tanh(z);
    case ActivationKind::affine:
        return z;
    }
    return z;
}

Interval activate(ActivationKind k, const Interval &z)
{
    switch (k) {
    case ActivationKind::relu:
        return Interval(std::max(0.0, z.lo()), std::max(0.0, z.hi()));
    case ActivationKind::sigmoid:
        return sigmoid(z);
    case ActivationKind::tanh:
        return tanh(z);
    case ActivationKind::affine:
        return z;
    }
    return z;
}

double activation_lipschitz(ActivationKind k, const Interval &range)
{
    const double m = range.mig();
    switch (k) {
    case ActivationKind::relu:
        return range.hi() <= 0 ? 0.0 : 1.0;
    case ActivationKind::affine:
        return 1.0;
    case ActivationKind::tanh: {
        const double t = std::tanh(m);
        return std::min(1.0, (1 - t * t) * (1 + 8 * kEps) + 4 * kEps);
    }
    case ActivationKind::sigmoid: {
        const double s = sigmoid(m);
        return std::min(0.25, s * (1 - s) * (1 + 8 * kEps) + 4 * kEps);
    }
    }
    return 1.0;
}

double LocalPolynomial::operator()(double z) const
{
    if (coeffs.empty()) {
        return 0;
    }
    if (radius == 0) {
        return coeffs[0];
    }
    const double s = (z - center) / radius;
    double acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        acc = acc * s + coeffs[i];
    }
    return acc;
}

std::vector<double> LocalPolynomial::power_basis() const
{
    if (coeffs.empty()) {
        return {0};
    }
    if (radius == 0) {
        return {coeffs[0]};
    }
    // Horner over s = alpha + beta z on dense coefficient vectors.
    const double alpha = -center / radius;
    const double beta = 1 / radius;
    std::vector<double> acc{0};
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        std::vector<double> next(acc.size() + 1, 0.0);
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next[j] += alpha * acc[j];
            next[j + 1] += beta * acc[j];
        }
        next[0] += coeffs[i];
        while (next.size() > 1 && next.back() == 0) {
            next.pop_back();
        }
        acc = std::move(next);
    }
    return acc;
}

LocalPolynomial bernstein_poly(ActivationKind kind, const Interval &range, unsigned k)
{
    if (k < 1) {
        throw ConfigError("Bernstein order must be at least 1");
    }
    if (range.lo() == range.hi()) {
        return constant_poly(activate(kind, Interval(range.lo())));
    }
    const auto [c, h] = normalization(range);
    const std::vector<Tracked> f = bernstein_nodes(kind, c, h, k);
    // The basis functions sum to one, so node errors add at most their maximum.
    double node_err = 0;
    for (const Tracked &fi : f) {
        node_err = std::max(node_err, fi.e);
    }
    std::vector<Tracked> b(k + 1);
    const double scale = std::ldexp(1.0, -int(k));
    for (unsigned i = 0; i <= k; ++i) {
        const std::vector<double> basis = bernstein_basis(k, i);
        const double w = binomial(k, i) * scale;
        for (unsigned j = 0; j <= k; ++j) {
            if (basis[j] != 0) {
                b[j] = t_add(b[j], t_mul(Tracked{f[i].v, 0}, Tracked{w * basis[j], 0}));
            }
        }
    }
    LocalPolynomial p;
    p.center = c;
    p.radius = h;
    double err = node_err;
    for (const Tracked &bj : b) {
        p.coeffs.push_back(bj.v);
        err += bj.e;
    }
    p.coeff_error = round_up(err);
    return p;
}

double poly_lipschitz(const LocalPolynomial &p)
{
    if (p.radius == 0 || p.coeffs.size() < 2) {
        return 0;
    }
    const Interval s(-1, 1);
    Interval acc(0);
    for (std::size_t i = p.coeffs.size(); i-- > 1;) {
        acc = acc * s + Interval(double(i) * p.coeffs[i]);
    }
    return (acc / Interval(p.radius)).mag();
}

Interval bernstein_remainder(ActivationKind kind, const LocalPolynomial &p, const Interval &range, unsigned m,
                             double lipschitz)
{
    if (m < 1) {
        throw ConfigError("remainder sample count must be at least 1");
    }
    if (range.lo() == range.hi()) {
        const double err = std::fabs(p(range.lo()) - activate(kind, range.lo()));
        return symmetric((err + sampling_slack(p, range, 0)) * (1 + 4 * kEps) + p.coeff_error);
    }
    const double sampled = sampled_error(kind, p, range, m);
    const double width = range.hi() - range.lo();
    const double eps = sampled + lipschitz * width / double(m) + sampling_slack(p, range, lipschitz);
    return symmetric(eps * (1 + 4 * kEps) + p.coeff_error);
}

UnivariateTM relu_tm(const Interval &range, unsigned k)
{
    if (k < 1) {
        throw ConfigError("Bernstein order must be at least 1");
    }
    if (range.lo() >= 0) {
        return {identity_poly(), Interval(0), range};
    }
    if (range.hi() <= 0) {
        return {zero_poly(), Interval(0), range};
    }
    LocalPolynomial p = bernstein_poly(ActivationKind::relu, range, k);
    // eps = p(0), evaluated at s0 = -c / h.
    const Tracked s0 = t_div(Tracked{-p.center, 0}, p.radius);
    Tracked e;
    for (std::size_t i = p.coeffs.size(); i-- > 0;) {
        e = t_add(t_mul(e, s0), Tracked{p.coeffs[i], 0});
    }
    const double half = 0.5 * e.v;
    const Tracked b0 = t_add(Tracked{p.coeffs[0], 0}, Tracked{-half, 0});
    p.coeffs[0] = b0.v;
    const double slack = p.coeff_error + e.e + b0.e;
    p.coeff_error = 0;
    return {p, symmetric(slack == 0 ? half : round_up(half + slack)), range};
}

UnivariateTM bernstein_tm(ActivationKind kind, const Interval &range, unsigned k, unsigned samples)
{
    switch (kind) {
    case ActivationKind::relu:
        return relu_tm(range, k);
    case ActivationKind::affine:
        return {identity_poly(), Interval(0), range};
    default:
        break;
    }
    LocalPolynomial p = bernstein_poly(kind, range, k);
    double lp = poly_lipschitz(p);
    if (range.lo() < range.hi()) {
        // Bernstein derivative hull: k * max |f_{i+1} - f_i| / (2 h).
        const std::vector<Tracked> f = bernstein_nodes(kind, p.center, p.radius, k);
        double d = 0;
        for (unsigned i = 0; i < k; ++i) {
            d = std::max(d, std::fabs(f[i + 1].v - f[i].v) + f[i + 1].e + f[i].e);
        }
        lp = std::min(lp, round_up(double(k) * round_up(d) / (2 * p.radius)));
    }
    const double l = std::max(activation_lipschitz(kind, range), lp);
    const Interval r = bernstein_remainder(kind, p, range, samples, l);
    return {p, r, range};
}

UnivariateTM taylor_tm(ActivationKind kind, const Interval &range, unsigned k, unsigned samples)
{
    ElementaryFunction f;
    switch (kind) {
    case ActivationKind::sigmoid:
        f = ElementaryFunction::sigmoid;
        break;
    case ActivationKind::tanh:
        f = ElementaryFunction::tanh;
        break;
    case ActivationKind::affine:
        return {identity_poly(), Interval(0), range};
    default:
        throw Error("taylor_tm: activation is not differentiable");
    }
    const double c = range.mid();
    const double h = 0.5 * (range.hi() - range.lo());
    if (h == 0) {
        const LocalPolynomial p = constant_poly(activate(kind, Interval(c)));
        return {p, bernstein_remainder(kind, p, range, samples, 0), range};
    }
    std::vector<Interval> a = taylor_coefficients(f, c, k);
    Interval hp(1);
    for (unsigned i = 0; i <= k; ++i) {
        a[i] = a[i] * hp;
        hp = hp * Interval(h);
    }
    const LocalPolynomial p = from_intervals(c, h, a);
    const double l = std::max(activation_lipschitz(kind, range), poly_lipschitz(p));
    return {p, bernstein_remainder(kind, p, range, samples, l), range};
}

TaylorModel compose(const UnivariateTM &a, const TaylorModel &input, unsigned order)
{
    const LocalPolynomial &p = a.poly;
    const Interval extra = a.remainder + symmetric(p.coeff_error);
    const bool exact = extra == Interval(0);
    if (is_identity(p)) {
        const TaylorModel t = input.order() == order ? input : tm_truncate(input, order);
        return exact ? t : t.with_remainder(t.remainder() + extra);
    }
    if (p.radius == 0 || p.coeffs.size() <= 1) {
        const double c0 = p.coeffs.empty() ? 0.0 : p.coeffs[0];
        return TaylorModel::constant(c0, input.domain(), order).with_remainder(extra);
    }
    TaylorModel s = tm_add_constant(input, -p.center);
    if (p.radius != 1) {
        s = tm_mul_interval(s, Interval(1) / Interval(p.radius));
    }
    const TaylorModel out = poly_compose(p.coeffs, s, order);
    return exact ? out : out.with_remainder(out.remainder() + extra);
}

Selection select_activation(ActivationKind k, const Interval &range, const TaylorModel &input, unsigned order,
                            const ActivationSettings &settings)
{
    Selection sel{bernstein_tm(k, range, settings.bernstein_order, settings.samples), true, std::nullopt};
    TaylorModel cb = compose(sel.chosen, input, order);
    if (k == ActivationKind::relu || k == ActivationKind::affine) {
        sel.composed = std::move(cb);
        return sel;
    }
    UnivariateTM t = taylor_tm(k, range, settings.bernstein_order, settings.samples);
    TaylorModel ct = compose(t, input, order);
    if (ct.remainder().width() < cb.remainder().width()) {
        sel.chosen = std::move(t);
        sel.bernstein = false;
        sel.composed = std::move(ct);
    } else {
        sel.composed = std::move(cb);
    }
    return sel;
}

TaylorModel select_activation_tm(ActivationKind k, const TaylorModel &input, unsigned order,
                                 const ActivationSettings &settings)
{
    const Interval range = tm_enclosure(input, RangeMethod::tight);
    Selection sel = select_activation(k, range, input, order, settings);
    if (sel.composed) {
        return std::move(*sel.composed);
    }
    return compose(sel.chosen, input, order);
}

std::pair<double, UnivariateTM> linear_part_split(const UnivariateTM &a)
{
    const LocalPolynomial &p = a.poly;
    if (p.radius == 0 || p.coeffs.size() < 2) {
        return {0.0, a};
    }
    const double q = p.coeffs[1] / p.radius;
    // p(z) - q z with z = c + h s: shift the constant and linear coefficients.
    std::vector<Interval> r;
    r.reserve(p.coeffs.size());
    for (double c : p.coeffs) {
        r.emplace_back(c);
    }
    r[0] = r[0] - Interval(q) * Interval(p.center);
    r[1] = r[1] - Interval(q) * Interval(p.radius);
    LocalPolynomial res = from_intervals(p.center, p.radius, r);
    res.coeff_error += p.coeff_error;
    res.coeff_error += std::fabs(res.coeffs[1]);
    res.coeffs[1] = 0;
    return {q, UnivariateTM{res, a.remainder, a.range}};
}

} // namespace tmreach
