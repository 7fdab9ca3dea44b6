#include <doctest.h>

#include <tmreach/polynomial.hpp>

#include "test_util.hpp"

using namespace tmreach;
using tmreach::test::sample;
using tmreach::test::uniform;

namespace
{

SparsePolynomial x1(std::size_t n = 1) { return SparsePolynomial::variable(n, 0); }
SparsePolynomial c(double v, std::size_t n = 1) { return SparsePolynomial::constant(n, v); }

SparsePolynomial random_poly(std::size_t nvars, unsigned degree, int nterms)
{
    std::vector<SparsePolynomial::Term> terms;
    for (int i = 0; i < nterms; ++i) {
        Monomial m;
        unsigned left = unsigned(uniform(0, degree + 0.999));
        for (std::size_t v = 0; v < nvars && left > 0; ++v) {
            const unsigned e = unsigned(uniform(0, left + 0.999));
            m.set(v, e);
            left -= e;
        }
        terms.push_back({m, uniform(-2, 2)});
    }
    return SparsePolynomial(nvars, std::move(terms));
}

Box random_box(std::size_t n)
{
    Box b(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = tmreach::test::random_interval(-2, 2);
    }
    return b;
}

} // namespace

TEST_CASE("addition and scaling")
{
    CHECK((x1() + c(1)) + (x1() - c(1)) == 2.0 * x1());
    const std::size_t n = 2;
    const SparsePolynomial xx = SparsePolynomial::variable(n, 0) * SparsePolynomial::variable(n, 0);
    const SparsePolynomial y = SparsePolynomial::variable(n, 1);
    const SparsePolynomial p = 3.0 * (xx + y);
    CHECK(p.coefficient(Monomial{2, 0}) == 3.0);
    CHECK(p.coefficient(Monomial{0, 1}) == 3.0);
    CHECK(p.size() == 2);
    CHECK((p + (-1.0) * p).is_zero());
    CHECK_THROWS_AS(x1(1) + x1(2), ShapeError);
}

TEST_CASE("truncated multiplication")
{
    const Box d{Interval(-1, 1)};
    {
        auto [p, tail] = poly_mul_trunc(x1(), x1(), 2, d);
        CHECK(p == x1() * x1());
        CHECK(tail == Interval(0));
    }
    {
        // Oracle: x^2 on [-1, 1] ranges over [0, 1].
        auto [p, tail] = poly_mul_trunc(x1(), x1(), 1, d);
        CHECK(p.is_zero());
        CHECK(tail.contains(Interval(0, 1)));
        CHECK(tail.lo() == 0);
        CHECK(tail.hi() == doctest::Approx(1).epsilon(1e-14));
    }
    {
        auto [p, tail] = poly_mul_trunc(c(1) + x1(), c(1) - x1(), 2, Box{Interval(-7, 3)});
        CHECK(p == c(1) - x1() * x1());
        CHECK(tail == Interval(0));
    }
    CHECK_THROWS_AS(poly_mul_trunc(x1(1), x1(2), 2, d), ShapeError);
}

TEST_CASE("range examples")
{
    const Box unit{Interval(0, 1)};
    const SparsePolynomial p = x1() * x1() - x1();
    for (auto method : {RangeMethod::horner, RangeMethod::termwise, RangeMethod::best, RangeMethod::tight}) {
        const Interval r = poly_range(p, unit, method);
        CHECK(r.contains(Interval(-0.25, 0)));
        CHECK(Interval(-1 - 1e-12, 1 + 1e-12).contains(r));
    }
    // Bernstein coefficients of x^2 - x on [0, 1] are 0, -1/2, 0.
    const Interval bern = poly_range(p, unit, RangeMethod::tight);
    CHECK(bern.lo() == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(bern.hi() == doctest::Approx(0).epsilon(1e-14));
    CHECK(poly_range(c(7, 3), Box{Interval(-1, 1), Interval(2, 3), Interval(0, 0)}) == Interval(7));
    const Box sq{Interval(-1, 1), Interval(-1, 1)};
    const SparsePolynomial xy = SparsePolynomial::variable(2, 0) * SparsePolynomial::variable(2, 1);
    const Interval r = poly_range(xy, sq);
    CHECK(r.contains(Interval(-1, 1)));
    CHECK(r.width() == doctest::Approx(2).epsilon(1e-14));
}

TEST_CASE("even powers stay tight under every range method")
{
    const Box d{Interval(-1, 1)};
    const SparsePolynomial xx = x1() * x1();
    CHECK(poly_range(xx, d, RangeMethod::horner).lo() == 0);
    CHECK(poly_range(xx, d, RangeMethod::termwise).lo() == 0);
}

TEST_CASE("range containment property")
{
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const SparsePolynomial p = random_poly(n, 5, 8);
        const Box d = random_box(n);
        const Interval h = poly_range(p, d, RangeMethod::horner);
        const Interval t = poly_range(p, d, RangeMethod::termwise);
        const Interval b = poly_range(p, d);
        const Interval g = poly_range(p, d, RangeMethod::tight);
        REQUIRE(b.contains(g));
        for (int s = 0; s < 50; ++s) {
            const auto x = sample(d);
            const double v = p.evaluate(x);
            REQUIRE(g.contains(v));
            REQUIRE(h.contains(v));
            REQUIRE(t.contains(v));
            REQUIRE(b.contains(v));
        }
    }
}

TEST_CASE("truncated product soundness property")
{
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const SparsePolynomial p = random_poly(n, 3, 5);
        const SparsePolynomial q = random_poly(n, 3, 5);
        const Box d = random_box(n);
        const unsigned k = unsigned(trial % 5);
        auto [prod, tail] = poly_mul_trunc(p, q, k, d);
        CHECK(prod.degree() <= k);
        for (int s = 0; s < 50; ++s) {
            const auto x = sample(d);
            const double exact = p.evaluate(x) * q.evaluate(x);
            const double slack = 1e-12 * (1 + std::fabs(exact));
            REQUIRE(exact >= prod.evaluate(x) + tail.lo() - slack);
            REQUIRE(exact <= prod.evaluate(x) + tail.hi() + slack);
        }
    }
}

TEST_CASE("calculus helpers")
{
    const std::size_t n = 2;
    const SparsePolynomial x = SparsePolynomial::variable(n, 0);
    const SparsePolynomial t = SparsePolynomial::variable(n, 1);
    const SparsePolynomial p = x * t + 3.0 * t * t;
    const SparsePolynomial ip = p.integrate(1);
    CHECK(ip.coefficient(Monomial{1, 2}) == 0.5);
    CHECK(ip.coefficient(Monomial{0, 3}) == 1.0);
    CHECK(ip.derivative(1) == p);
    const SparsePolynomial s = p.substitute(1, 2.0);
    CHECK(s == 2.0 * x + SparsePolynomial::constant(n, 12.0));
}

TEST_CASE("canonical rendering is graded and stable")
{
    const std::size_t n = 2;
    const SparsePolynomial x = SparsePolynomial::variable(n, 0);
    const SparsePolynomial y = SparsePolynomial::variable(n, 1);
    const SparsePolynomial p = y * y - 2.0 * x + x * y + SparsePolynomial::constant(n, 1) + 0.5 * x * x;
    CHECK(p.to_string() == "1 - 2*x1 + 0.5*x1^2 + x1*x2 + x2^2");
    const std::vector<std::string> names{"a", "b"};
    CHECK((-1.0 * y).to_string(names) == "-b");
    CHECK(SparsePolynomial(2).to_string() == "0");
}
