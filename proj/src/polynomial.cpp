#include <tmreach/polynomial.hpp>

#include <optional>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <tmreach/format.hpp>

namespace tmreach
{

Monomial::Monomial(std::initializer_list<unsigned> exps)
{
    if (exps.size() > kMaxVars) {
        throw ShapeError("Monomial: too many variables");
    }
    std::size_t i = 0;
    for (unsigned e : exps) {
        set(i++, e);
    }
}

Monomial Monomial::variable(std::size_t var, unsigned exponent)
{
    Monomial m;
    m.set(var, exponent);
    return m;
}

void Monomial::set(std::size_t var, unsigned exponent)
{
    if (var >= kMaxVars) {
        throw ShapeError("Monomial: variable index out of range");
    }
    if (exponent > 255) {
        throw ShapeError("Monomial: exponent out of range");
    }
    degree_ = static_cast<std::uint16_t>(degree_ - exps_[var] + exponent);
    exps_[var] = static_cast<std::uint8_t>(exponent);
}

Monomial operator*(const Monomial &a, const Monomial &b)
{
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        const unsigned e = unsigned(a.exps_[i]) + b.exps_[i];
        if (e > 255) {
            throw ShapeError("Monomial: exponent out of range");
        }
        r.exps_[i] = static_cast<std::uint8_t>(e);
    }
    r.degree_ = static_cast<std::uint16_t>(a.degree_ + b.degree_);
    return r;
}

std::strong_ordering operator<=>(const Monomial &a, const Monomial &b) noexcept
{
    if (a.degree_ != b.degree_) {
        return a.degree_ <=> b.degree_;
    }
    for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (a.exps_[i] != b.exps_[i]) {
            // Higher power of an earlier variable sorts first.
            return b.exps_[i] <=> a.exps_[i];
        }
    }
    return std::strong_ordering::equal;
}

SparsePolynomial::SparsePolynomial(std::size_t nvars) : nvars_(nvars)
{
    if (nvars > kMaxVars) {
        throw ShapeError("SparsePolynomial: too many variables");
    }
}

SparsePolynomial::SparsePolynomial(std::size_t nvars, std::vector<Term> terms)
    : SparsePolynomial(nvars)
{
    for (const auto &t : terms) {
        for (std::size_t v = nvars; v < kMaxVars; ++v) {
            if (t.monomial[v] != 0) {
                throw ShapeError("SparsePolynomial: monomial uses a variable beyond nvars");
            }
        }
    }
    terms_ = std::move(terms);
    normalize();
}

SparsePolynomial SparsePolynomial::constant(std::size_t nvars, double c)
{
    return SparsePolynomial(nvars, {{Monomial{}, c}});
}

SparsePolynomial SparsePolynomial::variable(std::size_t nvars, std::size_t var)
{
    if (var >= nvars) {
        throw ShapeError("SparsePolynomial::variable: index out of range");
    }
    return SparsePolynomial(nvars, {{Monomial::variable(var), 1.0}});
}

void SparsePolynomial::normalize()
{
    // Stable, so that equal monomials are summed in insertion order.
    std::stable_sort(terms_.begin(), terms_.end(),
              [](const Term &a, const Term &b) { return a.monomial < b.monomial; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
        Term acc = terms_[i];
        std::size_t j = i + 1;
        for (; j < terms_.size() && terms_[j].monomial == acc.monomial; ++j) {
            acc.coeff += terms_[j].coeff;
        }
        if (acc.coeff != 0) {
            terms_[out++] = acc;
        }
        i = j;
    }
    terms_.resize(out);
}

void SparsePolynomial::check_nvars(const SparsePolynomial &o, const char *op) const
{
    if (nvars_ != o.nvars_) {
        throw ShapeError(std::string(op) + ": variable count mismatch");
    }
}

unsigned SparsePolynomial::degree() const noexcept
{
    return terms_.empty() ? 0u : terms_.back().monomial.degree();
}

double SparsePolynomial::coefficient(const Monomial &m) const
{
    const auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                     [](const Term &t, const Monomial &key) { return t.monomial < key; });
    return (it != terms_.end() && it->monomial == m) ? it->coeff : 0.0;
}

SparsePolynomial &SparsePolynomial::operator+=(const SparsePolynomial &o)
{
    check_nvars(o, "polynomial addition");
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
        if (b == o.terms_.end() || (a != terms_.end() && a->monomial < b->monomial)) {
            merged.push_back(*a++);
        } else if (a == terms_.end() || b->monomial < a->monomial) {
            merged.push_back(*b++);
        } else {
            const double c = a->coeff + b->coeff;
            if (c != 0) {
                merged.push_back({a->monomial, c});
            }
            ++a;
            ++b;
        }
    }
    terms_ = std::move(merged);
    return *this;
}

SparsePolynomial &SparsePolynomial::operator-=(const SparsePolynomial &o) { return *this += -o; }

SparsePolynomial &SparsePolynomial::operator*=(double s)
{
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    std::size_t out = 0;
    for (auto &t : terms_) {
        t.coeff *= s;
        if (t.coeff != 0) {
            terms_[out++] = t;
        }
    }
    terms_.resize(out);
    return *this;
}

SparsePolynomial operator*(const SparsePolynomial &a, const SparsePolynomial &b)
{
    a.check_nvars(b, "polynomial multiplication");
    SparsePolynomial r(a.nvars_);
    r.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto &ta : a.terms_) {
        for (const auto &tb : b.terms_) {
            r.terms_.push_back({ta.monomial * tb.monomial, ta.coeff * tb.coeff});
        }
    }
    r.normalize();
    return r;
}

std::pair<SparsePolynomial, SparsePolynomial> SparsePolynomial::split_by_degree(unsigned order) const
{
    SparsePolynomial low(nvars_);
    SparsePolynomial high(nvars_);
    for (const auto &t : terms_) {
        (t.monomial.degree() <= order ? low : high).terms_.push_back(t);
    }
    return {std::move(low), std::move(high)};
}

SparsePolynomial SparsePolynomial::integrate(std::size_t var) const
{
    if (var >= nvars_) {
        throw ShapeError("integrate: variable index out of range");
    }
    SparsePolynomial r(nvars_);
    r.terms_.reserve(terms_.size());
    for (const auto &t : terms_) {
        Monomial m = t.monomial;
        const unsigned e = m[var] + 1;
        m.set(var, e);
        r.terms_.push_back({m, t.coeff / e});
    }
    r.normalize();
    return r;
}

SparsePolynomial SparsePolynomial::derivative(std::size_t var) const
{
    if (var >= nvars_) {
        throw ShapeError("derivative: variable index out of range");
    }
    SparsePolynomial r(nvars_);
    for (const auto &t : terms_) {
        const unsigned e = t.monomial[var];
        if (e == 0) {
            continue;
        }
        Monomial m = t.monomial;
        m.set(var, e - 1);
        r.terms_.push_back({m, t.coeff * e});
    }
    r.normalize();
    return r;
}

SparsePolynomial SparsePolynomial::substitute(std::size_t var, double value) const
{
    if (var >= nvars_) {
        throw ShapeError("substitute: variable index out of range");
    }
    SparsePolynomial r(nvars_);
    r.terms_.reserve(terms_.size());
    for (const auto &t : terms_) {
        Monomial m = t.monomial;
        const unsigned e = m[var];
        m.set(var, 0);
        r.terms_.push_back({m, t.coeff * std::pow(value, double(e))});
    }
    r.normalize();
    return r;
}

double SparsePolynomial::evaluate(std::span<const double> point) const
{
    if (point.size() != nvars_) {
        throw ShapeError("evaluate: point dimension mismatch");
    }
    const unsigned deg = degree();
    // powers[v * (deg + 1) + e] = point[v]^e
    std::vector<double> powers(nvars_ * (deg + 1));
    for (std::size_t v = 0; v < nvars_; ++v) {
        double p = 1;
        for (unsigned e = 0; e <= deg; ++e) {
            powers[v * (deg + 1) + e] = p;
            p *= point[v];
        }
    }
    double sum = 0;
    for (const auto &t : terms_) {
        double term = t.coeff;
        for (std::size_t v = 0; v < nvars_; ++v) {
            const unsigned e = t.monomial[v];
            if (e != 0) {
                term *= powers[v * (deg + 1) + e];
            }
        }
        sum += term;
    }
    return sum;
}

double SparsePolynomial::abs_norm(const Box &domain) const
{
    if (domain.size() != nvars_) {
        throw ShapeError("abs_norm: domain dimension mismatch");
    }
    double sum = 0;
    for (const auto &t : terms_) {
        double term = std::fabs(t.coeff);
        for (std::size_t v = 0; v < nvars_; ++v) {
            const unsigned e = t.monomial[v];
            if (e != 0) {
                term *= std::pow(domain[v].mag(), double(e));
            }
        }
        sum += term;
    }
    // Each term carries at most degree + 1 roundings and the sum one per term.
    const double slack = (degree() + terms_.size() + 2) * kRelEps;
    return sum * (1 + slack);
}

std::string SparsePolynomial::to_string(std::span<const std::string> names) const
{
    if (terms_.empty()) {
        return "0";
    }
    auto name = [&](std::size_t v) {
        return v < names.size() ? names[v] : "x" + std::to_string(v + 1);
    };
    std::ostringstream os;
    bool first = true;
    for (const auto &t : terms_) {
        double c = t.coeff;
        if (first) {
            if (c < 0) {
                os << '-';
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            c = std::fabs(c);
        }
        first = false;
        std::string mono;
        for (std::size_t v = 0; v < nvars_; ++v) {
            const unsigned e = t.monomial[v];
            if (e == 0) {
                continue;
            }
            if (!mono.empty()) {
                mono += '*';
            }
            mono += name(v);
            if (e > 1) {
                mono += '^' + std::to_string(e);
            }
        }
        if (mono.empty()) {
            os << format_double(c);
        } else if (c == 1) {
            os << mono;
        } else {
            os << format_double(c) << '*' << mono;
        }
    }
    return os.str();
}

bool operator==(const SparsePolynomial &a, const SparsePolynomial &b)
{
    if (a.nvars_ != b.nvars_ || a.terms_.size() != b.terms_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
        if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coeff != b.terms_[i].coeff) {
            return false;
        }
    }
    return true;
}

namespace
{

using Term = SparsePolynomial::Term;

// Horner enclosure over the variables var, var+1, ...; `terms` have zero
// exponents in all variables below `var`.
Interval horner(std::vector<Term> terms, std::size_t var, const Box &domain)
{
    while (var < domain.size() &&
           std::all_of(terms.begin(), terms.end(), [&](const Term &t) { return t.monomial[var] == 0; })) {
        ++var;
    }
    if (var >= domain.size()) {
        Interval sum(0);
        for (const auto &t : terms) {
            sum += Interval(t.coeff);
        }
        return sum;
    }
    std::map<unsigned, std::vector<Term>> groups;
    for (auto t : terms) {
        const unsigned e = t.monomial[var];
        t.monomial.set(var, 0);
        groups[e].push_back(t);
    }
    const Interval &x = domain[var];
    auto it = groups.rbegin();
    Interval acc = horner(std::move(it->second), var + 1, domain);
    unsigned prev = it->first;
    for (++it; it != groups.rend(); ++it) {
        acc = acc * pow(x, prev - it->first) + horner(std::move(it->second), var + 1, domain);
        prev = it->first;
    }
    return prev == 0 ? acc : acc * pow(x, prev);
}

Interval termwise(const SparsePolynomial &p, const Box &domain)
{
    const unsigned deg = p.degree();
    const std::size_t n = p.nvars();
    std::vector<Interval> powers(n * (deg + 1));
    for (std::size_t v = 0; v < n; ++v) {
        for (unsigned e = 0; e <= deg; ++e) {
            powers[v * (deg + 1) + e] = pow(domain[v], e);
        }
    }
    Interval sum(0);
    for (const auto &t : p.terms()) {
        Interval term(t.coeff);
        for (std::size_t v = 0; v < n; ++v) {
            const unsigned e = t.monomial[v];
            if (e != 0) {
                term *= powers[v * (deg + 1) + e];
            }
        }
        sum += term;
    }
    return sum;
}

// Hull of the coefficients in the tensor-product Bernstein basis of the box.
// Returns nullopt when the dense coefficient tensor would exceed kMaxCells.
std::optional<Interval> bernstein_hull(const SparsePolynomial &p, const Box &domain)
{
    constexpr std::size_t kMaxCells = 1u << 14;
    std::vector<std::size_t> vars;
    std::vector<unsigned> deg;
    for (std::size_t v = 0; v < p.nvars(); ++v) {
        unsigned d = 0;
        for (const auto &t : p.terms()) {
            d = std::max(d, t.monomial[v]);
        }
        if (d > 0) {
            vars.push_back(v);
            deg.push_back(d);
        }
    }
    std::vector<std::size_t> stride(vars.size());
    std::size_t cells = 1;
    for (std::size_t k = vars.size(); k-- > 0;) {
        stride[k] = cells;
        cells *= deg[k] + 1;
        if (cells > kMaxCells) {
            return std::nullopt;
        }
    }
    std::vector<Interval> c(cells, Interval(0));
    for (const auto &t : p.terms()) {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < vars.size(); ++k) {
            idx += t.monomial[vars[k]] * stride[k];
        }
        c[idx] = c[idx] + Interval(t.coeff);
    }
    std::vector<Interval> fiber;
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const unsigned d = deg[k];
        const Interval lo(domain[vars[k]].lo());
        const Interval w = Interval(domain[vars[k]].hi()) - lo;
        // binom[j][i] = C(j, i)
        std::vector<std::vector<double>> binom(d + 1, std::vector<double>(d + 1, 0.0));
        for (unsigned j = 0; j <= d; ++j) {
            binom[j][0] = 1;
            for (unsigned i = 1; i <= j; ++i) {
                binom[j][i] = binom[j - 1][i - 1] + (i <= j - 1 ? binom[j - 1][i] : 0.0);
            }
        }
        std::vector<Interval> lo_pow{Interval(1)}, w_pow{Interval(1)};
        for (unsigned i = 1; i <= d; ++i) {
            lo_pow.push_back(lo_pow.back() * lo);
            w_pow.push_back(w_pow.back() * w);
        }
        fiber.assign(d + 1, Interval(0));
        for (std::size_t base = 0; base < cells; ++base) {
            if ((base / stride[k]) % (d + 1) != 0) {
                continue;
            }
            // x = lo + w t, then the power basis in t to Bernstein coefficients.
            for (unsigned i = 0; i <= d; ++i) {
                Interval acc(0);
                for (unsigned j = i; j <= d; ++j) {
                    const Interval &a = c[base + j * stride[k]];
                    if (a.lo() != 0 || a.hi() != 0) {
                        acc = acc + a * Interval(binom[j][i]) * lo_pow[j - i];
                    }
                }
                fiber[i] = acc * w_pow[i];
            }
            for (unsigned i = 0; i <= d; ++i) {
                Interval b(0);
                for (unsigned j = 0; j <= i; ++j) {
                    b = b + fiber[j] * (Interval(binom[i][j]) / Interval(binom[d][j]));
                }
                c[base + i * stride[k]] = b;
            }
        }
    }
    double lo = c[0].lo(), hi = c[0].hi();
    for (const auto &b : c) {
        lo = std::min(lo, b.lo());
        hi = std::max(hi, b.hi());
    }
    return Interval(lo, hi);
}

} // namespace

Interval poly_range(const SparsePolynomial &p, const Box &domain, RangeMethod method)
{
    if (domain.size() != p.nvars()) {
        throw ShapeError("poly_range: domain dimension mismatch");
    }
    if (p.is_zero()) {
        return Interval(0);
    }
    if (p.degree() == 0) {
        return Interval(p.constant_term());
    }
    switch (method) {
    case RangeMethod::horner:
        return horner({p.terms().begin(), p.terms().end()}, 0, domain);
    case RangeMethod::termwise:
        return termwise(p, domain);
    case RangeMethod::best:
    case RangeMethod::tight:
        break;
    }
    const Interval h = horner({p.terms().begin(), p.terms().end()}, 0, domain);
    const Interval t = termwise(p, domain);
    Interval r = intersect(h, t).value_or(hull(h, t));
    if (method == RangeMethod::tight) {
        if (const auto b = bernstein_hull(p, domain)) {
            r = intersect(r, *b).value_or(r);
        }
    }
    return r;
}

std::pair<SparsePolynomial, Interval> poly_mul_trunc(const SparsePolynomial &p, const SparsePolynomial &q,
                                                     unsigned order, const Box &domain)
{
    if (p.nvars() != q.nvars()) {
        throw ShapeError("poly_mul_trunc: variable count mismatch");
    }
    if (domain.size() != p.nvars()) {
        throw ShapeError("poly_mul_trunc: domain dimension mismatch");
    }
    std::vector<Term> low;
    std::vector<Term> high;
    low.reserve(p.size() * q.size());
    for (const auto &a : p.terms()) {
        for (const auto &b : q.terms()) {
            Term t{a.monomial * b.monomial, a.coeff * b.coeff};
            (t.monomial.degree() <= order ? low : high).push_back(t);
        }
    }
    SparsePolynomial tail(p.nvars(), std::move(high));
    return {SparsePolynomial(p.nvars(), std::move(low)), poly_range(tail, domain)};
}

} // namespace tmreach
