#ifndef TMREACH_POLYNOMIAL_HPP
#define TMREACH_POLYNOMIAL_HPP

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <tmreach/interval.hpp>

namespace tmreach
{

// Maximum number of polynomial variables (state symbols plus local time).
inline constexpr std::size_t kMaxVars = 16;

// Dense exponent vector of a single monomial.
class Monomial
{
public:
    Monomial() = default;
    Monomial(std::initializer_list<unsigned> exps);

    static Monomial variable(std::size_t var, unsigned exponent = 1);

    unsigned operator[](std::size_t var) const noexcept { return exps_[var]; }
    void set(std::size_t var, unsigned exponent);
    unsigned degree() const noexcept { return degree_; }

    friend Monomial operator*(const Monomial &a, const Monomial &b);

    // Graded order: total degree first, then lexicographic with the lowest
    // variable index most significant (x1^2 < x1*x2 < x2^2 within degree 2).
    friend std::strong_ordering operator<=>(const Monomial &a, const Monomial &b) noexcept;
    friend bool operator==(const Monomial &a, const Monomial &b) noexcept = default;

private:
    std::array<std::uint8_t, kMaxVars> exps_{};
    std::uint16_t degree_ = 0;
};

enum class RangeMethod {
    // Multivariate interval Horner scheme, grouping terms by successive variables.
    horner,
    // Sum of per-monomial enclosures with tight even powers.
    termwise,
    // Intersection of the two enclosures above (both are valid).
    best,
    // best, further intersected with the hull of the tensor-product Bernstein
    // coefficients over the box when that tensor is small.
    tight,
};

// Sparse multivariate polynomial with double coefficients. Terms are kept
// sorted in Monomial order with no explicit zero coefficients.
class SparsePolynomial
{
public:
    struct Term {
        Monomial monomial;
        double coeff;
    };

    SparsePolynomial() = default;
    explicit SparsePolynomial(std::size_t nvars);
    SparsePolynomial(std::size_t nvars, std::vector<Term> terms);

    static SparsePolynomial constant(std::size_t nvars, double c);
    static SparsePolynomial variable(std::size_t nvars, std::size_t var);

    std::size_t nvars() const noexcept { return nvars_; }
    std::span<const Term> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    unsigned degree() const noexcept;
    double coefficient(const Monomial &m) const;
    double constant_term() const { return coefficient(Monomial{}); }

    SparsePolynomial &operator+=(const SparsePolynomial &o);
    SparsePolynomial &operator-=(const SparsePolynomial &o);
    SparsePolynomial &operator*=(double s);

    friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial &b) { return a += b; }
    friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial &b) { return a -= b; }
    friend SparsePolynomial operator-(SparsePolynomial a) { return a *= -1.0; }
    friend SparsePolynomial operator*(SparsePolynomial a, double s) { return a *= s; }
    friend SparsePolynomial operator*(double s, SparsePolynomial a) { return a *= s; }
    // Full product without truncation.
    friend SparsePolynomial operator*(const SparsePolynomial &a, const SparsePolynomial &b);

    // Splits into (terms of total degree <= order, terms above order).
    std::pair<SparsePolynomial, SparsePolynomial> split_by_degree(unsigned order) const;

    // Antiderivative in `var`, vanishing at var = 0.
    SparsePolynomial integrate(std::size_t var) const;
    SparsePolynomial derivative(std::size_t var) const;
    // Replaces `var` with a constant; the result keeps nvars() variables.
    SparsePolynomial substitute(std::size_t var, double value) const;

    double evaluate(std::span<const double> point) const;

    // Upper bound on sum |c| * max_{x in domain} |monomial(x)|. Every
    // floating-point coefficient-arithmetic error bound in the library is
    // expressed relative to this norm.
    double abs_norm(const Box &domain) const;

    // Canonical rendering in ascending graded order, e.g. "1 - 2*x1 + x1*x2^2".
    // Default names are x1, x2, ...
    std::string to_string(std::span<const std::string> names = {}) const;

    friend bool operator==(const SparsePolynomial &a, const SparsePolynomial &b);

private:
    void normalize();
    void check_nvars(const SparsePolynomial &o, const char *op) const;

    std::size_t nvars_ = 0;
    std::vector<Term> terms_;
};

// Enclosure of {p(x) | x in domain}.
Interval poly_range(const SparsePolynomial &p, const Box &domain, RangeMethod method = RangeMethod::best);

// Product truncated to total degree <= order, together with an enclosure of
// the discarded higher-degree terms over the domain.
std::pair<SparsePolynomial, Interval> poly_mul_trunc(const SparsePolynomial &p, const SparsePolynomial &q,
                                                     unsigned order, const Box &domain);

} // namespace tmreach

#endif
