#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qecad/qe.hpp"

using namespace qecad;

namespace {

UniPoly random_unipoly(std::mt19937& rng) {
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> deg(1, 4);
    int d = deg(rng);
    std::vector<Rational> c(static_cast<std::size_t>(d) + 1);
    for (auto& x : c) x = Rational(coeff(rng));
    if (c.back() == 0) c.back() = 1;
    return UniPoly(std::move(c));
}

Polynomial to_poly(const UniPoly& u, const VarOrderPtr& order) {
    Polynomial p(order);
    Polynomial x = Polynomial::variable(order, 0);
    for (std::size_t k = 0; k < u.coeffs().size(); ++k)
        p = p + x.pow(static_cast<unsigned>(k)) * u.coeffs()[k];
    return p;
}

bool matrix_holds_at(const FormulaPtr& sentence, const SamplePoint& pt) {
    PrenexFormula pf = to_prenex(sentence);
    std::map<Polynomial, int> cache;
    return detail::eval_matrix(pf.matrix, pt, cache);
}

}  // namespace

TEST_CASE("deciding simple sentences") {
    CHECK(decide("(forall x) x*x >= 0").value);
    CHECK_FALSE(decide("(exists x) x*x + 1 = 0").value);
    CHECK(decide("(exists x) x*x - 2 = 0").value);
    CHECK(decide("forall x. exists y. y - x > 0").value);
    CHECK_FALSE(decide("exists y. forall x. y - x > 0").value);
    CHECK(decide("1 > 0").value);          // variable-free sentence
    CHECK_FALSE(decide("0 != 0").value);
    CHECK_THROWS_AS(decide("x > 0"), usage_error);
}

TEST_CASE("deciding a quantifier alternation with parameters") {
    // solvability of a monic quadratic is exactly the discriminant condition
    CHECK(decide("forall b. forall c. "
                 "(exists x. x^2 + b*x + c = 0) <-> b^2 - 4*c >= 0")
              .value);
    CHECK_FALSE(decide("forall b. forall c. exists x. x^2 + b*x + c = 0").value);

    // both iff copies of a universally quantified operand must stay
    // independent after prenexing
    CHECK(decide("forall c. ((forall x. x^2 + c > 0) <-> (c > 0))").value);
}

TEST_CASE("witness sample agrees with the decision") {
    FormulaPtr yes = parse("(exists x) x*x - 2 = 0");
    Decision d1 = decide(yes);
    REQUIRE(d1.witness.has_value());
    CHECK(matrix_holds_at(yes, *d1.witness) == d1.value);

    FormulaPtr no = parse("(forall x) x*x - 2 > 0");
    Decision d2 = decide(no);
    CHECK_FALSE(d2.value);
    REQUIRE(d2.witness.has_value());
    CHECK_FALSE(matrix_holds_at(no, *d2.witness));
    // the counterexample really falsifies the body
    CHECK(sign_at(parse_polynomial("x*x - 2", to_prenex(no).order),
                  *d2.witness) <= 0);
}

TEST_CASE("soundness against a Sturm-based oracle") {
    auto o = make_order({"x"});
    std::mt19937 rng(53);
    for (int round = 0; round < 50; ++round) {
        UniPoly u = random_unipoly(rng);
        Polynomial p = to_poly(u, o);
        FormulaPtr has_root = f_exists("x", f_atom(p, Rel::Eq));
        UniPoly sf = uni_squarefree(u);
        Rational m = sf.degree() >= 1 ? root_bound(sf) : Rational(1);
        bool expect = sf.degree() >= 1 && sturm_count(sf, -m, m) > 0;
        CHECK(decide(has_root).value == expect);

        FormulaPtr positive = f_forall("x", f_atom(p, Rel::Gt));
        bool expect_pos = !expect && u.eval(Rational(0)) > 0;
        CHECK(decide(positive).value == expect_pos);
    }
}

TEST_CASE("short-circuiting changes statistics, never answers") {
    std::vector<std::string> sentences{
        "(exists x) x*x - 2 = 0",
        "forall x. exists y. y - x > 0",
        "forall b. forall c. exists x. x^2 + b*x + c = 0",
        "(forall x) x*x >= 0",
    };
    for (const std::string& s : sentences) {
        CAPTURE(s);
        QeOptions eager;
        QeOptions lazy;
        eager.short_circuit = false;
        Decision a = decide(s, eager);
        Decision b = decide(s, lazy);
        CHECK(a.value == b.value);
        CHECK(a.statistics.cells_skipped == 0);
        CHECK(b.statistics.cells_built <= a.statistics.cells_built);
    }
}

TEST_CASE("eliminating a solvable linear equation gives True") {
    FormulaPtr out = eliminate("exists x. x - y = 0");
    CHECK(out->kind == FKind::True);
}

TEST_CASE("eliminating the parabola range") {
    FormulaPtr out = eliminate("exists x. y - x^2 = 0");
    CHECK(free_variables(out) == std::vector<std::string>{"y"});
    CHECK(evaluate_qf(out, {{"y", Rational(1)}}));
    CHECK(evaluate_qf(out, {{"y", Rational(0)}}));
    CHECK_FALSE(evaluate_qf(out, {{"y", Rational(-1)}}));
    // adjacent cells y = 0 and y > 0 merge into one condition
    CHECK(render(out) == "y >= 0");
}

TEST_CASE("eliminating the quadratic solvability condition") {
    FormulaPtr out = eliminate("exists x. x^2 + b*x + c = 0", {}, {"b", "c"});
    FormulaPtr expect = parse("b^2 - 4*c >= 0");
    std::mt19937 rng(59);
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    for (int round = 0; round < 200; ++round) {
        std::map<std::string, Rational> pt{{"b", make_rational(num(rng), den(rng))},
                                           {"c", make_rational(num(rng), den(rng))}};
        CHECK(evaluate_qf(out, pt) == evaluate_qf(expect, pt));
    }
}

TEST_CASE("eliminate rejects sentences, decide rejects free variables") {
    CHECK_THROWS_AS(eliminate("forall x. x*x >= 0"), usage_error);
    CHECK_THROWS_AS(decide("exists x. x - y = 0"), usage_error);
}

TEST_CASE("elimination output is deterministic") {
    std::string a = render(eliminate("exists x. y - x^2 = 0"));
    std::string b = render(eliminate("exists x. y - x^2 = 0"));
    CHECK(a == b);
}

TEST_CASE("time budget propagates") {
    QeOptions opts;
    opts.cad.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(decide("(forall x) x*x >= 0", opts), timeout_error);
    CHECK_THROWS_AS(eliminate("exists x. y - x^2 = 0", opts), timeout_error);
}
