#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qdx/expr.hpp"
#include "support.hpp"

using namespace qdx;
using expr::parse, expr::eval, expr::to_string;

TEST_CASE("evaluation basics") {
    CHECK(eval(parse("a*x^alpha"), 2.0, {{"a", 2.0}, {"alpha", 3.0}}) == 16.0);
    CHECK(eval(parse("exp(x)"), 0.0) == 1.0);
    CHECK(eval(parse("ln(exp(1))"), 0.0) == doctest::Approx(1.0));
    CHECK(eval(parse("pow(x, 0.5)"), 4.0) == 2.0);
    CHECK(eval(parse("2 + 3"), 0.0) == 5.0);
    CHECK(eval(parse("1e-3 + 1.5E2"), 0.0) == doctest::Approx(150.001));
}

TEST_CASE("precedence goldens") {
    CHECK(eval(parse("2+3*4^2"), 0.0) == 50.0);      // ^ over *, * over +
    CHECK(eval(parse("2^3^2"), 0.0) == 512.0);       // ^ right associative
    CHECK(eval(parse("-2^2"), 0.0) == -4.0);         // unary minus below ^
    CHECK(eval(parse("(-2)^2"), 0.0) == 4.0);
    CHECK(eval(parse("-x^2"), 3.0) == -9.0);
    CHECK(eval(parse("6/3/2"), 0.0) == 1.0);         // / left associative
    CHECK(eval(parse("2-3-4"), 0.0) == -5.0);
    CHECK(eval(parse("2*-x"), 5.0) == -10.0);        // unary minus as operand
    CHECK(eval(parse("x^-1"), 4.0) == 0.25);         // unary minus in exponent
    CHECK(eval(parse("2^-2*8"), 0.0) == 2.0);
}

TEST_CASE("domain and binding errors") {
    CHECK_THROWS_AS(eval(parse("1/(1-x)"), 1.0), DomainError);
    CHECK_THROWS_AS(eval(parse("ln(x)"), 0.0), DomainError);
    CHECK_THROWS_AS(eval(parse("ln(0-1)"), 0.0), DomainError);
    CHECK_THROWS_AS(eval(parse("x^(1/2)"), -1.0), DomainError);
    CHECK_THROWS_AS(eval(parse("0^(0-1)"), 0.0), DomainError);
    CHECK_THROWS_AS(eval(parse("a*x"), 1.0), DomainError); // unbound a
    CHECK(eval(parse("x^3"), -2.0) == -8.0);               // integer powers of negatives are fine
}

TEST_CASE("syntax errors carry byte offsets") {
    try {
        parse("a*+b");
        FAIL("expected ParseError");
    } catch (const expr::ParseError& e) {
        CHECK(e.offset() == 2);
        CHECK(!e.expected().empty());
    }
    try {
        parse("(1+2");
        FAIL("expected ParseError");
    } catch (const expr::ParseError& e) {
        CHECK(e.offset() == 4);
    }
    CHECK_THROWS_AS(parse(""), expr::ParseError);
    CHECK_THROWS_AS(parse("1+"), expr::ParseError);
    CHECK_THROWS_AS(parse("f(1)"), expr::ParseError);     // unknown function
    CHECK_THROWS_AS(parse("pow(1)"), expr::ParseError);   // missing second argument
    CHECK_THROWS_AS(parse("1 2"), expr::ParseError);      // trailing token
}

TEST_CASE("sampling onto grids") {
    QGrid g(1.0, 0.5, 3);
    LatticeFn zeros = expr::sample(parse("0"), g);
    for (std::size_t i = 0; i < zeros.size(); ++i) CHECK(zeros[i] == 0.0);

    LatticeFn xs = expr::sample(parse("x"), g);
    CHECK(xs[0] == 1.0);
    CHECK(xs[1] == 0.5);
    CHECK(xs[2] == 0.25);
    CHECK(xs[3] == 0.125);

    // alpha > -1 keeps the power-law finite on a positive lattice
    LatticeFn p = expr::sample(parse("a*x^alpha"), g, {{"a", 1.0}, {"alpha", -0.5}});
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::isfinite(p[i]));

    // evaluation failure reports the lattice index
    try {
        expr::sample(parse("1/(1-x)"), g);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        REQUIRE(e.index().has_value());
        CHECK(*e.index() == 0); // x = 1 is the base point
    }
}

namespace {

/// Random AST built from the full grammar surface.
expr::Expr random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 7);
    std::uniform_real_distribution<double> num(-4.0, 4.0);
    switch (pick(rng)) {
        case 0: return parse(std::to_string(num(rng)));
        case 1: return parse("x");
        case 2: return parse("p1");
        default: break;
    }
    const auto a = to_string(random_expr(rng, depth - 1));
    const auto b = to_string(random_expr(rng, depth - 1));
    switch (pick(rng) % 6) {
        case 0: return parse(a + "+" + b);
        case 1: return parse(a + "-" + b);
        case 2: return parse(a + "*" + b);
        case 3: return parse(a + "/(" + b + ")");
        case 4: return parse("-(" + a + ")");
        default: return parse("exp((" + a + ")*0.125)");
    }
}

} // namespace

TEST_CASE("print/parse round trip evaluates identically") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> xd(0.1, 3.0);
    int checked = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        expr::Expr e = random_expr(rng, 3);
        expr::Expr r = parse(to_string(e));
        for (int k = 0; k < 10; ++k) {
            const double x = xd(rng);
            double v1 = 0.0, v2 = 0.0;
            bool t1 = false, t2 = false;
            try {
                v1 = eval(e, x, {{"p1", 0.75}});
            } catch (const DomainError&) {
                t1 = true;
            }
            try {
                v2 = eval(r, x, {{"p1", 0.75}});
            } catch (const DomainError&) {
                t2 = true;
            }
            REQUIRE(t1 == t2);
            if (!t1) {
                // exact float equality, not approximate
                CHECK(v1 == v2);
                ++checked;
            }
        }
    }
    CHECK(checked > 5000);
}
