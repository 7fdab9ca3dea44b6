#ifndef TMREACH_TAYLOR_MODEL_HPP
#define TMREACH_TAYLOR_MODEL_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include <tmreach/interval.hpp>
#include <tmreach/polynomial.hpp>

namespace tmreach
{

// The box every Taylor model of one analysis is defined over. Shared and
// read-only once built.
using DomainPtr = std::shared_ptr<const Box>;

inline DomainPtr make_domain(Box box) { return std::make_shared<const Box>(std::move(box)); }

// A Taylor model (p, I) of order k over a shared domain D: a function f is
// enclosed when f(x) in p(x) + I for every x in D.
//
// Coefficient arithmetic is done in doubles; every operation adds a bound on
// its own floating-point error to the remainder, so that enclosure is
// preserved with respect to exact real arithmetic.
class TaylorModel
{
public:
    TaylorModel(SparsePolynomial poly, Interval remainder, DomainPtr domain, unsigned order);

    static TaylorModel constant(double c, DomainPtr domain, unsigned order);
    static TaylorModel constant(const Interval &c, DomainPtr domain, unsigned order);
    static TaylorModel variable(std::size_t var, DomainPtr domain, unsigned order);

    const SparsePolynomial &poly() const noexcept { return poly_; }
    const Interval &remainder() const noexcept { return remainder_; }
    const DomainPtr &domain() const noexcept { return domain_; }
    unsigned order() const noexcept { return order_; }
    std::size_t nvars() const noexcept { return poly_.nvars(); }

    TaylorModel with_remainder(const Interval &r) const;

    // p(x) + I at a domain point, enclosing the polynomial evaluation error.
    Interval evaluate(std::span<const double> point) const;

    bool same_domain(const TaylorModel &o) const noexcept;

private:
    SparsePolynomial poly_;
    Interval remainder_;
    DomainPtr domain_;
    unsigned order_;
};

// Ordering used when choosing between Taylor models of the same function:
// a precedes b when a's remainder is strictly narrower.
bool tm_narrower(const TaylorModel &a, const TaylorModel &b);

TaylorModel tm_add(const TaylorModel &a, const TaylorModel &b);
TaylorModel tm_sub(const TaylorModel &a, const TaylorModel &b);
TaylorModel tm_neg(const TaylorModel &a);
TaylorModel tm_scale(const TaylorModel &a, double s);
TaylorModel tm_add_constant(const TaylorModel &a, double c);
TaylorModel tm_add_interval(const TaylorModel &a, const Interval &c);
// Order-k product; the truncated tail and the cross terms with the
// remainders are bounded over the domain.
TaylorModel tm_mul(const TaylorModel &a, const TaylorModel &b);
TaylorModel tm_mul_interval(const TaylorModel &a, const Interval &c);

// poly_range(p, D, method) + I.
Interval tm_enclosure(const TaylorModel &a, RangeMethod method = RangeMethod::best);
// Moves all terms above new_order into the remainder.
TaylorModel tm_truncate(const TaylorModel &a, unsigned new_order);
// Antiderivative in `var` from 0; var's domain component must have lo >= 0.
TaylorModel tm_integrate(const TaylorModel &a, std::size_t var);
// Fixes `var` to a value inside its domain component.
TaylorModel tm_substitute(const TaylorModel &a, std::size_t var, double value);

inline TaylorModel operator+(const TaylorModel &a, const TaylorModel &b) { return tm_add(a, b); }
inline TaylorModel operator-(const TaylorModel &a, const TaylorModel &b) { return tm_sub(a, b); }
inline TaylorModel operator-(const TaylorModel &a) { return tm_neg(a); }
inline TaylorModel operator*(const TaylorModel &a, const TaylorModel &b) { return tm_mul(a, b); }
inline TaylorModel operator*(const TaylorModel &a, double s) { return tm_scale(a, s); }
inline TaylorModel operator*(double s, const TaylorModel &a) { return tm_scale(a, s); }
inline TaylorModel operator+(const TaylorModel &a, double c) { return tm_add_constant(a, c); }
inline TaylorModel operator-(const TaylorModel &a, double c) { return tm_add_constant(a, -c); }

// Components of a vector-valued Taylor model; all share one domain and order.
class TMVector
{
public:
    TMVector() = default;
    explicit TMVector(std::vector<TaylorModel> components);

    std::size_t size() const noexcept { return comps_.size(); }
    bool empty() const noexcept { return comps_.empty(); }
    const TaylorModel &operator[](std::size_t i) const { return comps_[i]; }
    auto begin() const noexcept { return comps_.begin(); }
    auto end() const noexcept { return comps_.end(); }
    const std::vector<TaylorModel> &components() const noexcept { return comps_; }

    void push_back(TaylorModel tm);

    const DomainPtr &domain() const;
    unsigned order() const;

    std::vector<Interval> remainders() const;
    std::vector<Interval> enclosure(RangeMethod method = RangeMethod::tight) const;

private:
    std::vector<TaylorModel> comps_;
};

// Row j of W * v + B. The sum runs in ascending input index; norms[k] must be
// v[k].poly().abs_norm(domain).
TaylorModel tm_linear_row(const Eigen::Ref<const Eigen::RowVectorXd> &row, double bias, const TMVector &v,
                          std::span<const double> norms);

// W * v + B with exact-in-structure polynomial combination and interval
// arithmetic on the remainders.
TMVector tm_linear_map(const Eigen::MatrixXd &W, const Eigen::VectorXd &B, const TMVector &v);

// outer(inner) for a univariate outer polynomial given by its dense
// coefficients c[0] + c[1] z + ..., evaluated by Horner's rule in order-k
// Taylor model arithmetic.
TaylorModel poly_compose(std::span<const double> coeffs, const TaylorModel &inner, unsigned order);
// Same, for a SparsePolynomial in one variable.
TaylorModel poly_compose(const SparsePolynomial &outer, const TaylorModel &inner, unsigned order);

} // namespace tmreach

#endif
