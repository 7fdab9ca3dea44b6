#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include <tmreach/expression.hpp>

#include "test_util.hpp"

using namespace tmreach;

namespace
{

const std::vector<std::string> docking_vars{"x", "y", "vx", "vy", "fx", "fy"};

double eval_d(const Expr &e, const std::vector<double> &v) { return evaluate<double>(e, v, 0.0); }

} // namespace

TEST_CASE("docking velocity equation parses to the expected tree")
{
    const Expr e = parse_expression("0.002054*vy + 3*0.001027^2*x + fx/12", docking_vars);
    CHECK(e.to_string(docking_vars) == "(((0.002054 * vy) + ((3 * (0.001027^2)) * x)) + (fx / 12))");
    const std::vector<double> v{100, 0, 0, 2, 6, 0};
    CHECK(eval_d(e, v) == doctest::Approx(0.002054 * 2 + 3 * 0.001027 * 0.001027 * 100 + 0.5));
    const auto used = e.uses(docking_vars.size());
    CHECK(used == std::vector<bool>{true, false, false, true, true, false});
}

TEST_CASE("functions and precedence")
{
    const Expr s = parse_expression("sqrt(vx^2+vy^2)", docking_vars);
    CHECK(s.to_string(docking_vars) == "sqrt(((vx^2) + (vy^2)))");
    const std::vector<std::string> xy{"x", "y"};
    CHECK(parse_expression("-x^2", xy).to_string(xy) == "(-(x^2))");
    CHECK(parse_expression("x - y - 1", xy).to_string(xy) == "((x - y) - 1)");
    CHECK(parse_expression("x / y * 2", xy).to_string(xy) == "((x / y) * 2)");
    CHECK(parse_expression("2*x^-1", xy).to_string(xy) == "(2 * (x^-1))");
    CHECK(parse_expression("pow(x+1, 3)", xy).to_string(xy) == "((x + 1)^3)");
    CHECK(parse_expression("1.5e-3 * exp(x) + tanh(y)", xy).to_string(xy) == "((0.0015 * exp(x)) + tanh(y))");
    CHECK(eval_d(parse_expression("-x^2", xy), {3, 0}) == -9);
    CHECK(eval_d(parse_expression("sin(x)^2 + cos(x)^2", xy), {0.7, 0}) == doctest::Approx(1));
}

TEST_CASE("parse errors carry a column")
{
    const std::vector<std::string> xy{"x", "y"};
    try {
        parse_expression("foo(x)", xy);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.column() == 1);
        CHECK(std::string(e.what()).find("unknown function") != std::string::npos);
    }
    try {
        parse_expression("x + z", xy);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(parse_expression("x^1.5", xy), ParseError);
    CHECK_THROWS_AS(parse_expression("(x + 1", xy), ParseError);
    CHECK_THROWS_AS(parse_expression("x +", xy), ParseError);
    CHECK_THROWS_AS(parse_expression("x y", xy), ParseError);
    CHECK_THROWS_AS(parse_expression("", xy), ParseError);
}

TEST_CASE("constraints normalize to g <= 0")
{
    const std::vector<std::string> xy{"x", "y"};
    const Constraint a = parse_constraint("x <= 2", xy);
    CHECK_FALSE(a.strict);
    CHECK(eval_d(a.g, {3, 0}) == 1);
    const Constraint b = parse_constraint("x + y >= 1", xy);
    CHECK(eval_d(b.g, {0.25, 0.25}) == 0.5);
    const Constraint c = parse_constraint("y > 0", xy);
    CHECK(c.strict);
    CHECK(holds(c, eval_d(c.g, {0, 1})));
    CHECK_FALSE(holds(c, eval_d(c.g, {0, 0})));
    CHECK(holds(a, eval_d(a.g, {2, 0})));
    CHECK_THROWS_AS(parse_constraint("x + y", xy), ParseError);
    CHECK_THROWS_AS(parse_constraint("0 < x < 1", xy), ParseError);

    CHECK(classify(a, Interval(-2, 0)) == Truth::yes);
    CHECK(classify(c, Interval(-2, 0)) == Truth::maybe);
    CHECK(classify(a, Interval(0.5, 1)) == Truth::no);
    CHECK(classify(a, Interval(-0.5, 1)) == Truth::maybe);
}

TEST_CASE("interval and Taylor model evaluation enclose the double evaluation")
{
    const std::vector<std::string> xy{"x", "y"};
    const char *exprs[] = {
        "0.002054*y + 3*0.001027^2*x + x/12",
        "sqrt(x^2 + y^2 + 1)",
        "exp(-x) * sin(y) - cos(x*y)",
        "log(2 + x) / (3 + y)",
        "tanh(2*x - y)^3 + 1/(x + 4)",
        "(1 - 2/3) * x",
    };
    const Box box{Interval(-1, 1), Interval(-0.5, 0.5)};
    const auto dom = make_domain(Box{Interval(-1, 1), Interval(-1, 1)});
    for (const char *text : exprs) {
        CAPTURE(std::string(text));
        const Expr e = parse_expression(text, xy);
        const std::vector<Interval> iv(box.begin(), box.end());
        const Interval range = evaluate<Interval>(e, iv, Interval(0));
        // x = x1, y = 0.5 * x2 over the unit domain.
        std::vector<TaylorModel> tv{TaylorModel::variable(0, dom, 4), TaylorModel::variable(1, dom, 4) * 0.5};
        const TaylorModel tm = evaluate<TaylorModel>(e, tv, tv[0]);
        for (int s = 0; s < 500; ++s) {
            const auto p = tmreach::test::sample(*dom);
            const std::vector<double> v{p[0], 0.5 * p[1]};
            const double f = eval_d(e, v);
            REQUIRE(range.contains(f));
            REQUIRE(tm.evaluate(p).contains(f));
        }
    }
}

TEST_CASE("constant expressions lift through the context value")
{
    const std::vector<std::string> xy{"x", "y"};
    const auto dom = make_domain(Box{Interval(-1, 1)});
    const auto x = TaylorModel::variable(0, dom, 3);
    const std::vector<TaylorModel> tv{x, x};
    const TaylorModel one = evaluate<TaylorModel>(parse_expression("1", xy), tv, x);
    CHECK(one.poly() == SparsePolynomial::constant(1, 1));
    const TaylorModel third = evaluate<TaylorModel>(parse_expression("1/3", xy), tv, x);
    CHECK(tm_enclosure(third).contains(Interval(1.0 / 3)));
    CHECK_THROWS_AS(evaluate<double>(parse_expression("sqrt(x)", xy), std::vector<double>{-1, 0}, 0.0),
                    DomainError);
}
