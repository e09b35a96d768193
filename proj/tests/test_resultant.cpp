#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qecad/formula.hpp"
#include "qecad/resultant.hpp"
#include "qecad/unipoly.hpp"

using namespace qecad;

namespace {

Polynomial P(const std::string& text, const VarOrderPtr& order) {
    return parse_polynomial(text, order);
}

// Random univariate-in-x polynomial with small rational coefficients and
// degree in [1, maxdeg].
Polynomial random_in_x(std::mt19937& rng, const VarOrderPtr& order, int maxdeg) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> deg(1, maxdeg);
    int d = deg(rng);
    Polynomial p(order);
    Polynomial x = Polynomial::variable(order, 0);
    for (int k = 0; k < d; ++k)
        p = p + x.pow(static_cast<unsigned>(k)) * Rational(coeff(rng));
    int lead = coeff(rng);
    if (lead == 0) lead = 1;
    return p + x.pow(static_cast<unsigned>(d)) * Rational(lead);
}

int euclidean_gcd_degree(Polynomial a, Polynomial b, int v) {
    UniPoly ua = UniPoly::from_polynomial(a, v);
    UniPoly ub = UniPoly::from_polynomial(b, v);
    return uni_gcd(ua, ub).degree();
}

}  // namespace

TEST_CASE("hand-checked resultants") {
    auto o = make_order({"x"});
    CHECK(sylvester_resultant(P("x - 1", o), P("x - 2", o), 0) ==
          Polynomial::constant(o, Rational(-1)));
    CHECK(sylvester_resultant(P("(x-1)*(x-2)", o), P("x - 1", o), 0).is_zero());

    auto q = make_order({"a", "b", "c", "x1", "x2"});
    Polynomial f = P("a*x2^2 + b*x2 + c - x1", q);
    CHECK(sylvester_resultant(f, f.derivative(4), 4) ==
          P("4*a^2*(c - x1) - a*b^2", q));
}

TEST_CASE("resultant preconditions") {
    auto o = make_order({"x", "y"});
    CHECK_THROWS_AS(sylvester_resultant(P("y", o), P("y + 1", o), 0), usage_error);
    CHECK_THROWS_AS(sylvester_resultant(Polynomial(o), P("x", o), 0), usage_error);
}

TEST_CASE("psc examples and range checks") {
    auto o = make_order({"x"});
    CHECK(psc(P("x - 1", o), P("x - 2", o), 0, 0) ==
          Polynomial::constant(o, Rational(-1)));

    Polynomial a = P("(x-1)*(x-2)", o);
    Polynomial b = P("(x-1)*(x-3)", o);
    CHECK(psc(a, b, 0, 0).is_zero());
    CHECK_FALSE(psc(a, b, 0, 1).is_zero());

    auto q = make_order({"a", "b", "c", "x1", "x2"});
    Polynomial f = P("a*x2^2 + b*x2 + c - x1", q);
    CHECK(psc(f, f.derivative(4), 4, 0) == P("4*a^2*(c - x1) - a*b^2", q));

    CHECK_THROWS_AS(psc(a, b, 0, 3), usage_error);
    CHECK_THROWS_AS(psc(a, b, 0, -1), usage_error);
}

TEST_CASE("multiplicativity on random triples") {
    auto o = make_order({"x"});
    std::mt19937 rng(17);
    for (int round = 0; round < 100; ++round) {
        Polynomial a = random_in_x(rng, o, 3);
        Polynomial b = random_in_x(rng, o, 3);
        Polynomial c = random_in_x(rng, o, 3);
        CHECK(sylvester_resultant(a, b * c, 0) ==
              sylvester_resultant(a, b, 0) * sylvester_resultant(a, c, 0));
    }
}

TEST_CASE("common-root criterion") {
    auto o = make_order({"x"});
    std::mt19937 rng(19);
    std::uniform_int_distribution<int> root(-3, 3);
    for (int round = 0; round < 50; ++round) {
        Polynomial x = Polynomial::variable(o, 0);
        Polynomial shared = x - Polynomial::constant(o, Rational(root(rng)));
        Polynomial a = random_in_x(rng, o, 2);
        Polynomial b = random_in_x(rng, o, 2);
        CHECK(sylvester_resultant(a * shared, b * shared, 0).is_zero());
        // without a designed shared factor, zero resultant must coincide
        // with an actual positive-degree gcd
        bool zero = sylvester_resultant(a, b, 0).is_zero();
        CHECK(zero == (euclidean_gcd_degree(a, b, 0) >= 1));
    }
}

TEST_CASE("smallest nonzero psc index equals gcd degree") {
    auto o = make_order({"x"});
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> root(-2, 2);
    std::uniform_int_distribution<int> shared_deg(0, 2);
    for (int round = 0; round < 100; ++round) {
        Polynomial x = Polynomial::variable(o, 0);
        Polynomial shared = Polynomial::constant(o, Rational(1));
        int sd = shared_deg(rng);
        for (int i = 0; i < sd; ++i)
            shared = shared * (x - Polynomial::constant(o, Rational(root(rng))));
        Polynomial a = random_in_x(rng, o, 2) * shared;
        Polynomial b = random_in_x(rng, o, 2) * shared;
        int expect = euclidean_gcd_degree(a, b, 0);
        int top = std::min(a.degree_in(0), b.degree_in(0));
        int first = -1;
        for (int l = 0; l <= top; ++l)
            if (!psc(a, b, 0, l).is_zero()) {
                first = l;
                break;
            }
        if (first < 0) first = top + 1;  // all psc vanish up to the range end
        CHECK(first == expect);
    }
}

TEST_CASE("determinant basics") {
    auto o = make_order({"x"});
    Matrix m(2, 2, o);
    m.at(0, 0) = P("x", o);
    m.at(0, 1) = Polynomial::constant(o, Rational(1));
    m.at(1, 0) = Polynomial::constant(o, Rational(1));
    m.at(1, 1) = P("x", o);
    CHECK(determinant(m, o) == P("x^2 - 1", o));

    Matrix zero(3, 3, o);
    CHECK(determinant(zero, o).is_zero());
    CHECK(determinant(Matrix(0, 0, o), o) == Polynomial::constant(o, Rational(1)));
}
