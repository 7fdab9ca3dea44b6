#ifndef TMREACH_EXPRESSION_HPP
#define TMREACH_EXPRESSION_HPP

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <tmreach/error.hpp>
#include <tmreach/interval.hpp>
#include <tmreach/taylor_model.hpp>
#include <tmreach/tm_functions.hpp>

namespace tmreach
{

// Expression trees over named variables for plant dynamics, guards and
// transforms. Admitted: + - * /, integer powers, sin cos exp log sqrt tanh.
class Expr
{
public:
    enum class Kind { number, variable, neg, add, sub, mul, div, pow, func };

    struct Node {
        Kind kind = Kind::number;
        double value = 0;
        std::size_t var = 0;
        int exponent = 0;
        ElementaryFunction fn = ElementaryFunction::exp;
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
    };

    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

    static Expr number(double v);
    static Expr variable(std::size_t index);
    static Expr binary(Kind kind, const Expr &a, const Expr &b);

    const Node &root() const { return *root_; }
    bool valid() const noexcept { return root_ != nullptr; }

    // Fully parenthesized rendering with the given variable names.
    std::string to_string(std::span<const std::string> names) const;
    // Flags the variables the expression reads, sized to nvars.
    std::vector<bool> uses(std::size_t nvars) const;

private:
    std::shared_ptr<const Node> root_;
};

// Parses `text` with the identifiers in `names` as variables. ParseError
// carries the 1-based column of the offending character on line 1.
Expr parse_expression(std::string_view text, std::span<const std::string> names);

// g(x) <= 0, or g(x) < 0 when strict.
struct Constraint {
    Expr g;
    bool strict = false;
    std::string text;
};

// Accepts "lhs <= rhs", ">=", "<" and ">" with exactly one comparison.
Constraint parse_constraint(std::string_view text, std::span<const std::string> names);

// A conjunction holds on a set when every constraint certainly holds.
enum class Truth { yes, no, maybe };

Truth classify(const Constraint &c, const Interval &g_range);
Truth classify(const std::vector<Constraint> &conj, std::span<const Interval> g_ranges);
bool holds(const Constraint &c, double g_value);

// Operations the evaluator needs from each value algebra.
namespace algebra
{

inline double add(double x, const Interval &c) { return x + c.mid(); }
inline double mul(double x, const Interval &c) { return x * c.mid(); }
double recip(double x);
inline double div(double a, double b) { return a * recip(b); }
double powi(double x, int n);
double apply(ElementaryFunction f, double x);
inline double from_constant(const Interval &c, double) { return c.mid(); }

inline Interval add(const Interval &x, const Interval &c) { return x + c; }
inline Interval mul(const Interval &x, const Interval &c) { return x * c; }
Interval recip(const Interval &x);
inline Interval div(const Interval &a, const Interval &b) { return a / b; }
Interval powi(const Interval &x, int n);
Interval apply(ElementaryFunction f, const Interval &x);
inline Interval from_constant(const Interval &c, const Interval &) { return c; }

inline TaylorModel add(const TaylorModel &x, const Interval &c) { return tm_add_interval(x, c); }
inline TaylorModel mul(const TaylorModel &x, const Interval &c) { return tm_mul_interval(x, c); }
inline TaylorModel recip(const TaylorModel &x) { return tm_recip(x); }
inline TaylorModel div(const TaylorModel &a, const TaylorModel &b) { return tm_div(a, b); }
inline TaylorModel powi(const TaylorModel &x, int n) { return tm_pow(x, n); }
inline TaylorModel apply(ElementaryFunction f, const TaylorModel &x) { return tm_apply(f, x); }
inline TaylorModel from_constant(const Interval &c, const TaylorModel &like)
{
    return TaylorModel::constant(c, like.domain(), like.order());
}

template <class T> struct Value {
    std::optional<Interval> c;
    std::optional<T> v;
};

template <class T> Value<T> eval_node(const Expr::Node &n, std::span<const T> vars)
{
    using K = Expr::Kind;
    switch (n.kind) {
    case K::number:
        return {Interval(n.value), std::nullopt};
    case K::variable:
        if (n.var >= vars.size()) {
            throw ShapeError("expression reads a variable beyond the supplied values");
        }
        return {std::nullopt, vars[n.var]};
    case K::neg: {
        auto x = eval_node<T>(*n.a, vars);
        if (x.c) {
            return {-*x.c, std::nullopt};
        }
        return {std::nullopt, T(-*x.v)};
    }
    case K::pow: {
        auto x = eval_node<T>(*n.a, vars);
        if (x.c) {
            return {powi(*x.c, n.exponent), std::nullopt};
        }
        return {std::nullopt, powi(*x.v, n.exponent)};
    }
    case K::func: {
        auto x = eval_node<T>(*n.a, vars);
        if (x.c) {
            return {apply(n.fn, *x.c), std::nullopt};
        }
        return {std::nullopt, apply(n.fn, *x.v)};
    }
    default:
        break;
    }
    auto x = eval_node<T>(*n.a, vars);
    auto y = eval_node<T>(*n.b, vars);
    if (x.c && y.c) {
        switch (n.kind) {
        case K::add:
            return {*x.c + *y.c, std::nullopt};
        case K::sub:
            return {*x.c - *y.c, std::nullopt};
        case K::mul:
            return {*x.c * *y.c, std::nullopt};
        default:
            return {*x.c * recip(*y.c), std::nullopt};
        }
    }
    switch (n.kind) {
    case K::add:
        if (x.c) {
            return {std::nullopt, add(*y.v, *x.c)};
        }
        if (y.c) {
            return {std::nullopt, add(*x.v, *y.c)};
        }
        return {std::nullopt, T(*x.v + *y.v)};
    case K::sub:
        if (x.c) {
            return {std::nullopt, add(T(-*y.v), *x.c)};
        }
        if (y.c) {
            return {std::nullopt, add(*x.v, -*y.c)};
        }
        return {std::nullopt, T(*x.v - *y.v)};
    case K::mul:
        if (x.c) {
            return {std::nullopt, mul(*y.v, *x.c)};
        }
        if (y.c) {
            return {std::nullopt, mul(*x.v, *y.c)};
        }
        return {std::nullopt, T(*x.v * *y.v)};
    default:
        if (x.c) {
            return {std::nullopt, mul(recip(*y.v), *x.c)};
        }
        if (y.c) {
            return {std::nullopt, mul(*x.v, recip(*y.c))};
        }
        return {std::nullopt, div(*x.v, *y.v)};
    }
}

} // namespace algebra

// Evaluates e over values of one algebra (double, Interval or TaylorModel).
// Constant subexpressions are folded in interval arithmetic. A constant
// result is lifted through from_constant using `like` for context.
template <class T> T evaluate(const Expr &e, std::span<const T> vars, const T &like)
{
    auto r = algebra::eval_node<T>(e.root(), vars);
    if (r.v) {
        return std::move(*r.v);
    }
    return algebra::from_constant(*r.c, like);
}

} // namespace tmreach

#endif
