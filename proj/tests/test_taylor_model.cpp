#include <doctest.h>

#include <functional>

#include <tmreach/taylor_model.hpp>

#include "test_util.hpp"

using namespace tmreach;
using tmreach::test::sample;
using tmreach::test::uniform;

namespace
{

DomainPtr unit1() { return make_domain(Box{Interval(-1, 1)}); }

bool close(const Interval &a, const Interval &b, double tol = 1e-13)
{
    return std::fabs(a.lo() - b.lo()) <= tol && std::fabs(a.hi() - b.hi()) <= tol;
}

} // namespace

TEST_CASE("tm_add examples")
{
    const auto d = unit1();
    const auto x = TaylorModel::variable(0, d, 3);
    const auto one = TaylorModel::constant(1.0, d, 3);
    const auto s = x + (one - x);
    CHECK(s.poly() == SparsePolynomial::constant(1, 1.0));
    CHECK(close(s.remainder(), Interval(0)));

    const auto a = x.with_remainder(Interval(-1, 1));
    const auto b = TaylorModel::constant(0.0, d, 3).with_remainder(Interval(-1, 1));
    const auto ab = a + b;
    CHECK(ab.poly() == x.poly());
    CHECK(close(ab.remainder(), Interval(-2, 2)));

    const auto p = (x * x * 2.0 + 0.5).with_remainder(Interval(0.1, 0.3));
    const auto q = (-p).with_remainder(Interval(-0.3, -0.1));
    const auto pq = p + q;
    CHECK(pq.poly().is_zero());
    CHECK(close(pq.remainder(), Interval(-0.2, 0.2)));

    CHECK_THROWS_AS(x + TaylorModel::variable(0, make_domain(Box{Interval(0, 1)}), 3), ShapeError);
    CHECK_THROWS_AS(x + TaylorModel::variable(0, d, 2), ShapeError);
}

TEST_CASE("tm_mul examples")
{
    const auto d = unit1();
    {
        const auto x = TaylorModel::variable(0, d, 2);
        const auto xx = x * x;
        CHECK(xx.poly() == x.poly() * x.poly());
        CHECK(close(xx.remainder(), Interval(0)));
    }
    {
        // Oracle: the dropped x^2 ranges over [0, 1] on the domain.
        const auto x = TaylorModel::variable(0, d, 1);
        const auto xx = x * x;
        CHECK(xx.poly().is_zero());
        CHECK(xx.remainder().contains(Interval(0, 1)));
        CHECK(close(xx.remainder(), Interval(0, 1)));
    }
    {
        // (1 + r1)(1 + r2) - 1 = r1 + r2 + r1 r2 with r in [-0.1, 0.1].
        const auto a = TaylorModel::constant(1.0, d, 3).with_remainder(Interval(-0.1, 0.1));
        const auto p = a * a;
        CHECK(p.poly() == SparsePolynomial::constant(1, 1.0));
        CHECK(p.remainder().contains(Interval(-0.21, 0.21)));
        CHECK(close(p.remainder(), Interval(-0.21, 0.21)));
    }
}

TEST_CASE("tm_linear_map examples")
{
    const auto d = unit1();
    const auto x = TaylorModel::variable(0, d, 3);
    {
        const TMVector v({x.with_remainder(Interval(-0.5, 0.5)), (x * x).with_remainder(Interval(0, 0.1))});
        const TMVector out = tm_linear_map(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), v);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(out[i].poly() == v[i].poly());
            CHECK(close(out[i].remainder(), v[i].remainder()));
        }
    }
    {
        const TMVector v({x, -x});
        const TMVector out = tm_linear_map(Eigen::MatrixXd::Ones(1, 2), Eigen::VectorXd::Zero(1), v);
        CHECK(out.size() == 1);
        CHECK(out[0].poly().is_zero());
        CHECK(close(out[0].remainder(), Interval(0)));
    }
    {
        const TMVector v({x.with_remainder(Interval(-0.5, 0.5))});
        Eigen::MatrixXd W(1, 1);
        W << 2;
        Eigen::VectorXd B(1);
        B << 1;
        const TMVector out = tm_linear_map(W, B, v);
        CHECK(out[0].poly() == 2.0 * x.poly() + SparsePolynomial::constant(1, 1.0));
        CHECK(close(out[0].remainder(), Interval(-1, 1)));
    }
    const TMVector v({x});
    CHECK_THROWS_AS(tm_linear_map(Eigen::MatrixXd::Ones(1, 2), Eigen::VectorXd::Zero(1), v), ShapeError);
}

TEST_CASE("tm_enclosure examples")
{
    const auto d = unit1();
    const auto x = TaylorModel::variable(0, d, 3);
    CHECK(close(tm_enclosure(x.with_remainder(Interval(-0.1, 0.1))), Interval(-1.1, 1.1)));
    CHECK(close(tm_enclosure(x * 0.25 + 0.5), Interval(0.25, 0.75)));
    const auto u = make_domain(Box{Interval(0, 1)});
    const auto y = TaylorModel::variable(0, u, 3);
    CHECK(tm_enclosure(y - y * y).contains(Interval(0, 0.25)));
}

TEST_CASE("tm_truncate examples")
{
    const auto d = unit1();
    const auto x = TaylorModel::variable(0, d, 3);
    const auto t = tm_truncate(x * x, 1);
    CHECK(t.poly().is_zero());
    CHECK(t.order() == 1);
    CHECK(close(t.remainder(), Interval(0, 1)));
    const auto same = tm_truncate(x * x, 3);
    CHECK(same.poly() == (x * x).poly());
    CHECK(same.remainder() == (x * x).remainder());
    const auto k = TaylorModel::constant(2.5, d, 3);
    CHECK(tm_truncate(k, 0).poly() == k.poly());
    CHECK(tm_truncate(k, 0).remainder() == Interval(0));
}

TEST_CASE("width ordering is a strict partial order")
{
    const auto d = unit1();
    std::vector<TaylorModel> tms;
    for (int i = 0; i < 20; ++i) {
        const double r = uniform(0, 1);
        tms.push_back(TaylorModel::variable(0, d, 2).with_remainder(Interval(-r, r * uniform(0, 1))));
    }
    for (const auto &a : tms) {
        CHECK_FALSE(tm_narrower(a, a));
        for (const auto &b : tms) {
            if (tm_narrower(a, b)) {
                CHECK_FALSE(tm_narrower(b, a));
                for (const auto &c : tms) {
                    if (tm_narrower(b, c)) {
                        CHECK(tm_narrower(a, c));
                    }
                }
            }
        }
    }
}

namespace
{

// A Taylor model together with the exact function it encloses, for
// random-expression soundness testing.
struct Tracked {
    TaylorModel tm;
    std::function<double(const std::vector<double> &)> f;
};

} // namespace

TEST_CASE("enclosure soundness over random operation sequences")
{
    const auto d = make_domain(Box{Interval(-1, 1), Interval(-0.5, 0.5)});
    for (int trial = 0; trial < 60; ++trial) {
        const unsigned k = 1 + unsigned(trial % 4);
        std::vector<Tracked> pool;
        pool.push_back({TaylorModel::variable(0, d, k), [](const auto &x) { return x[0]; }});
        pool.push_back({TaylorModel::variable(1, d, k), [](const auto &x) { return x[1]; }});
        const double c0 = uniform(-1, 1);
        pool.push_back({TaylorModel::constant(c0, d, k), [c0](const auto &) { return c0; }});
        for (int step = 0; step < 8; ++step) {
            const auto &a = pool[std::size_t(uniform(0, double(pool.size()) - 1e-9))];
            const auto &b = pool[std::size_t(uniform(0, double(pool.size()) - 1e-9))];
            const int op = int(uniform(0, 4 - 1e-9));
            const auto fa = a.f;
            const auto fb = b.f;
            if (op == 0) {
                pool.push_back({a.tm + b.tm, [=](const auto &x) { return fa(x) + fb(x); }});
            } else if (op == 1) {
                pool.push_back({a.tm - b.tm, [=](const auto &x) { return fa(x) - fb(x); }});
            } else if (op == 2) {
                pool.push_back({a.tm * b.tm, [=](const auto &x) { return fa(x) * fb(x); }});
            } else {
                const double s = uniform(-2, 2);
                pool.push_back({a.tm * s, [=](const auto &x) { return fa(x) * s; }});
            }
        }
        for (const auto &t : pool) {
            for (int s = 0; s < 200; ++s) {
                const auto x = sample(*d);
                REQUIRE(t.tm.evaluate(x).contains(t.f(x)));
            }
        }
        // Enclosure of a sum is within the sum of enclosures.
        const auto &a = pool[pool.size() - 1];
        const auto &b = pool[pool.size() - 2];
        const Interval lhs = tm_enclosure(a.tm + b.tm);
        const Interval rhs = tm_enclosure(a.tm) + tm_enclosure(b.tm);
        const double slack = 1e-12 * (1 + rhs.mag());
        CHECK(lhs.lo() >= rhs.lo() - slack);
        CHECK(lhs.hi() <= rhs.hi() + slack);
    }
}

TEST_CASE("integration and substitution in local time")
{
    const auto d = make_domain(Box{Interval(-1, 1), Interval(0, 0.1)});
    const auto x = TaylorModel::variable(0, d, 3);
    const auto one = TaylorModel::constant(1.0, d, 3).with_remainder(Interval(-0.01, 0.01));
    // int_0^tau (1 + r) = tau + tau*r
    const auto it = tm_integrate(one, 1);
    CHECK(it.poly() == SparsePolynomial::variable(2, 1));
    CHECK(it.remainder().contains(Interval(-0.001, 0.001)));
    const auto s = tm_substitute(x + it, 1, 0.1);
    CHECK(s.poly().coefficient(Monomial{0, 0}) == doctest::Approx(0.1));
    CHECK_THROWS_AS(tm_substitute(x, 1, 0.2), DomainError);
}

TEST_CASE("poly_compose")
{
    const auto d = unit1();
    const auto x = TaylorModel::variable(0, d, 2);
    const auto inner = x.with_remainder(Interval(-0.1, 0.2));
    const SparsePolynomial z = SparsePolynomial::variable(1, 0);
    const auto id = poly_compose(z, inner, 2);
    CHECK(id.poly() == inner.poly());
    CHECK(close(id.remainder(), inner.remainder()));
    const auto sq = poly_compose(z * z, x, 2);
    CHECK(sq.poly() == (x * x).poly());
    CHECK(close(sq.remainder(), Interval(0)));
    CHECK_THROWS_AS(poly_compose(SparsePolynomial::variable(2, 0), x, 2), ShapeError);
}
