#include <tmreach/taylor_model.hpp>

#include <cmath>

namespace tmreach
{

namespace
{

Interval rounding(double bound) { return symmetric(bound); }

void check_compatible(const TaylorModel &a, const TaylorModel &b, const char *op)
{
    if (!a.same_domain(b)) {
        throw ShapeError(std::string(op) + ": Taylor models live on different domains");
    }
    if (a.order() != b.order()) {
        throw ShapeError(std::string(op) + ": Taylor model orders differ");
    }
}

bool is_zero(const Interval &i) { return i.lo() == 0 && i.hi() == 0; }

} // namespace

TaylorModel::TaylorModel(SparsePolynomial poly, Interval remainder, DomainPtr domain, unsigned order)
    : poly_(std::move(poly)), remainder_(remainder), domain_(std::move(domain)), order_(order)
{
    if (!domain_) {
        throw ShapeError("TaylorModel: null domain");
    }
    if (poly_.nvars() != domain_->size()) {
        throw ShapeError("TaylorModel: polynomial variable count differs from domain dimension");
    }
    if (poly_.degree() > order_) {
        throw ShapeError("TaylorModel: polynomial degree exceeds the model order");
    }
}

TaylorModel TaylorModel::constant(double c, DomainPtr domain, unsigned order)
{
    const std::size_t n = domain->size();
    return TaylorModel(SparsePolynomial::constant(n, c), Interval(0), std::move(domain), order);
}

TaylorModel TaylorModel::constant(const Interval &c, DomainPtr domain, unsigned order)
{
    const std::size_t n = domain->size();
    const double m = c.mid();
    return TaylorModel(SparsePolynomial::constant(n, m), c - m, std::move(domain), order);
}

TaylorModel TaylorModel::variable(std::size_t var, DomainPtr domain, unsigned order)
{
    if (order == 0) {
        const Interval &d = (*domain)[var];
        return constant(d, std::move(domain), 0);
    }
    const std::size_t n = domain->size();
    return TaylorModel(SparsePolynomial::variable(n, var), Interval(0), std::move(domain), order);
}

TaylorModel TaylorModel::with_remainder(const Interval &r) const
{
    TaylorModel out = *this;
    out.remainder_ = r;
    return out;
}

Interval TaylorModel::evaluate(std::span<const double> point) const
{
    if (point.size() != nvars()) {
        throw ShapeError("TaylorModel::evaluate: point dimension mismatch");
    }
    double sum = 0;
    double abs_sum = 0;
    for (const auto &t : poly_.terms()) {
        double term = t.coeff;
        for (std::size_t v = 0; v < nvars(); ++v) {
            for (unsigned e = t.monomial[v]; e != 0; --e) {
                term *= point[v];
            }
        }
        sum += term;
        abs_sum += std::fabs(term);
    }
    const double err = (poly_.degree() + poly_.size() + 2) * kRelEps * abs_sum;
    return Interval(sum - err, sum + err) + remainder_;
}

bool TaylorModel::same_domain(const TaylorModel &o) const noexcept
{
    return domain_ == o.domain_ || *domain_ == *o.domain_;
}

bool tm_narrower(const TaylorModel &a, const TaylorModel &b)
{
    check_compatible(a, b, "tm_narrower");
    return (a.remainder().hi() - a.remainder().lo()) < (b.remainder().hi() - b.remainder().lo());
}

TaylorModel tm_add(const TaylorModel &a, const TaylorModel &b)
{
    check_compatible(a, b, "tm_add");
    SparsePolynomial p = a.poly() + b.poly();
    Interval r = a.remainder() + b.remainder();
    if (!a.poly().is_zero() && !b.poly().is_zero()) {
        r += rounding(kRelEps * p.abs_norm(*a.domain()));
    }
    return TaylorModel(std::move(p), r, a.domain(), a.order());
}

TaylorModel tm_sub(const TaylorModel &a, const TaylorModel &b)
{
    check_compatible(a, b, "tm_sub");
    SparsePolynomial p = a.poly() - b.poly();
    Interval r = a.remainder() - b.remainder();
    if (!a.poly().is_zero() && !b.poly().is_zero()) {
        r += rounding(kRelEps * p.abs_norm(*a.domain()));
    }
    return TaylorModel(std::move(p), r, a.domain(), a.order());
}

TaylorModel tm_neg(const TaylorModel &a)
{
    return TaylorModel(-a.poly(), -a.remainder(), a.domain(), a.order());
}

TaylorModel tm_scale(const TaylorModel &a, double s)
{
    if (s == 1) {
        return a;
    }
    if (s == -1) {
        return tm_neg(a);
    }
    SparsePolynomial p = a.poly() * s;
    Interval r = a.remainder() * s;
    if (!p.is_zero()) {
        r += rounding(kRelEps * p.abs_norm(*a.domain()));
    }
    return TaylorModel(std::move(p), r, a.domain(), a.order());
}

TaylorModel tm_add_constant(const TaylorModel &a, double c)
{
    SparsePolynomial p = a.poly() + SparsePolynomial::constant(a.nvars(), c);
    Interval r = a.remainder();
    if (c != 0 && a.poly().constant_term() != 0) {
        r += rounding(kRelEps * std::fabs(p.constant_term()));
    }
    return TaylorModel(std::move(p), r, a.domain(), a.order());
}

TaylorModel tm_add_interval(const TaylorModel &a, const Interval &c)
{
    const double m = c.mid();
    TaylorModel out = tm_add_constant(a, m);
    return out.with_remainder(out.remainder() + (c - m));
}

TaylorModel tm_mul(const TaylorModel &a, const TaylorModel &b)
{
    check_compatible(a, b, "tm_mul");
    const Box &dom = *a.domain();
    auto [p, tail] = poly_mul_trunc(a.poly(), b.poly(), a.order(), dom);
    Interval r = tail;
    if (!is_zero(b.remainder())) {
        r += poly_range(a.poly(), dom) * b.remainder();
    }
    if (!is_zero(a.remainder())) {
        r += poly_range(b.poly(), dom) * a.remainder();
    }
    if (!is_zero(a.remainder()) && !is_zero(b.remainder())) {
        r += a.remainder() * b.remainder();
    }
    if (!a.poly().is_zero() && !b.poly().is_zero()) {
        const double depth = double(std::min(a.poly().size(), b.poly().size()) + 2);
        r += rounding(depth * kRelEps * a.poly().abs_norm(dom) * b.poly().abs_norm(dom));
    }
    return TaylorModel(std::move(p), r, a.domain(), a.order());
}

TaylorModel tm_mul_interval(const TaylorModel &a, const Interval &c)
{
    const double m = c.mid();
    TaylorModel out = tm_scale(a, m);
    const Interval dev = c - m;
    if (is_zero(dev)) {
        return out;
    }
    return out.with_remainder(out.remainder() + tm_enclosure(a) * dev);
}

Interval tm_enclosure(const TaylorModel &a, RangeMethod method)
{
    return poly_range(a.poly(), *a.domain(), method) + a.remainder();
}

TaylorModel tm_truncate(const TaylorModel &a, unsigned new_order)
{
    if (new_order >= a.order()) {
        return TaylorModel(a.poly(), a.remainder(), a.domain(), std::max(new_order, a.order()));
    }
    auto [low, high] = a.poly().split_by_degree(new_order);
    Interval r = a.remainder();
    if (!high.is_zero()) {
        r += poly_range(high, *a.domain());
    }
    return TaylorModel(std::move(low), r, a.domain(), new_order);
}

TaylorModel tm_integrate(const TaylorModel &a, std::size_t var)
{
    const Box &dom = *a.domain();
    if (var >= dom.size()) {
        throw ShapeError("tm_integrate: variable index out of range");
    }
    auto [low, high] = a.poly().integrate(var).split_by_degree(a.order());
    Interval r = dom[var] * a.remainder();
    if (!high.is_zero()) {
        r += poly_range(high, dom);
    }
    r += rounding(kRelEps * (low.abs_norm(dom) + high.abs_norm(dom)));
    return TaylorModel(std::move(low), r, a.domain(), a.order());
}

TaylorModel tm_substitute(const TaylorModel &a, std::size_t var, double value)
{
    const Box &dom = *a.domain();
    if (var >= dom.size()) {
        throw ShapeError("tm_substitute: variable index out of range");
    }
    if (!dom[var].contains(value)) {
        throw DomainError("tm_substitute: value outside the variable's domain");
    }
    SparsePolynomial p = a.poly().substitute(var, value);
    const double slack = (a.poly().degree() + 2) * kRelEps * a.poly().abs_norm(dom);
    return TaylorModel(std::move(p), a.remainder() + rounding(slack), a.domain(), a.order());
}

TMVector::TMVector(std::vector<TaylorModel> components)
{
    comps_.reserve(components.size());
    for (auto &c : components) {
        push_back(std::move(c));
    }
}

void TMVector::push_back(TaylorModel tm)
{
    if (!comps_.empty()) {
        check_compatible(comps_.front(), tm, "TMVector");
    }
    comps_.push_back(std::move(tm));
}

const DomainPtr &TMVector::domain() const
{
    if (comps_.empty()) {
        throw ShapeError("TMVector::domain: empty vector");
    }
    return comps_.front().domain();
}

unsigned TMVector::order() const
{
    if (comps_.empty()) {
        throw ShapeError("TMVector::order: empty vector");
    }
    return comps_.front().order();
}

std::vector<Interval> TMVector::remainders() const
{
    std::vector<Interval> out;
    out.reserve(size());
    for (const auto &c : comps_) {
        out.push_back(c.remainder());
    }
    return out;
}

std::vector<Interval> TMVector::enclosure(RangeMethod method) const
{
    std::vector<Interval> out;
    out.reserve(size());
    for (const auto &c : comps_) {
        out.push_back(tm_enclosure(c, method));
    }
    return out;
}

TaylorModel tm_linear_row(const Eigen::Ref<const Eigen::RowVectorXd> &row, double bias, const TMVector &v,
                          std::span<const double> norms)
{
    if (static_cast<std::size_t>(row.size()) != v.size() || norms.size() != v.size()) {
        throw ShapeError("tm_linear_row: weight row length differs from input size");
    }
    const std::size_t nvars = v.domain()->size();
    std::vector<SparsePolynomial::Term> terms;
    Interval r(0);
    double bound = std::fabs(bias);
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double w = row(static_cast<Eigen::Index>(k));
        if (w == 0) {
            continue;
        }
        for (const auto &t : v[k].poly().terms()) {
            terms.push_back({t.monomial, w * t.coeff});
        }
        r += v[k].remainder() * w;
        bound += std::fabs(w) * norms[k];
    }
    terms.push_back({Monomial{}, bias});
    r += rounding((v.size() + 2) * kRelEps * bound);
    return TaylorModel(SparsePolynomial(nvars, std::move(terms)), r, v.domain(), v.order());
}

TMVector tm_linear_map(const Eigen::MatrixXd &W, const Eigen::VectorXd &B, const TMVector &v)
{
    if (static_cast<std::size_t>(W.cols()) != v.size() || W.rows() != B.size()) {
        throw ShapeError("tm_linear_map: matrix/vector dimensions do not chain");
    }
    std::vector<double> norms;
    norms.reserve(v.size());
    for (const auto &c : v) {
        norms.push_back(c.poly().abs_norm(*c.domain()));
    }
    TMVector out;
    for (Eigen::Index j = 0; j < W.rows(); ++j) {
        out.push_back(tm_linear_row(W.row(j), B(j), v, norms));
    }
    return out;
}

TaylorModel poly_compose(std::span<const double> coeffs, const TaylorModel &inner, unsigned order)
{
    const TaylorModel z = tm_truncate(inner, order);
    if (coeffs.empty()) {
        return TaylorModel::constant(0.0, inner.domain(), order);
    }
    std::size_t i = coeffs.size() - 1;
    TaylorModel acc = TaylorModel::constant(coeffs[i], inner.domain(), order);
    while (i-- > 0) {
        acc = tm_add_constant(tm_mul(acc, z), coeffs[i]);
    }
    return acc;
}

TaylorModel poly_compose(const SparsePolynomial &outer, const TaylorModel &inner, unsigned order)
{
    if (outer.nvars() != 1) {
        throw ShapeError("poly_compose: outer polynomial must be univariate");
    }
    std::vector<double> dense(outer.degree() + 1, 0.0);
    for (const auto &t : outer.terms()) {
        dense[t.monomial[0]] = t.coeff;
    }
    return poly_compose(std::span<const double>(dense), inner, order);
}

} // namespace tmreach
