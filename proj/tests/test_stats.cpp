#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qecad/qe.hpp"
#include "qecad/stats.hpp"

using namespace qecad;

TEST_CASE("correlation naming and ordering") {
    CHECK(correlation_name(1, 2) == "r12");
    CHECK(correlation_name(2, 1) == "r12");
    CHECK(correlation_name(10, 11) == "r10_11");
    VarOrderPtr o = correlation_order(3);
    REQUIRE(o->size() == 3);
    CHECK(o->name(0) == "r12");
    CHECK(o->name(1) == "r13");
    CHECK(o->name(2) == "r23");
    CHECK(correlation_order(4)->size() == 6);
}

TEST_CASE("conditional independence constraints") {
    VarOrderPtr o = correlation_order(3);
    FormulaPtr a = gaussian_constraints({{1}, {2}, {}}, 3);
    CHECK(a->kind == FKind::Atom);
    CHECK(a->rel == Rel::Eq);
    CHECK(a->poly == parse_polynomial("r12", o));

    FormulaPtr b = gaussian_constraints({{1}, {3}, {2}}, 3);
    CHECK(b->poly == parse_polynomial("r13 - r12*r23", o));

    CHECK_THROWS_AS(gaussian_constraints({{1, 2}, {3}, {}}, 3), usage_error);
    CHECK_THROWS_AS(gaussian_constraints({{1}, {2}, {3, 4}}, 4), usage_error);
    CHECK_THROWS_AS(gaussian_constraints({{1}, {1}, {}}, 3), usage_error);
    CHECK_THROWS_AS(gaussian_constraints({{1}, {4}, {}}, 3), usage_error);
}

TEST_CASE("positive definiteness via leading principal minors") {
    VarOrderPtr o = correlation_order(3);
    FormulaPtr pd = positive_definite_formula(3);
    REQUIRE(pd->kind == FKind::And);
    CHECK(pd->kids[0]->poly == parse_polynomial("1 - r12^2", o));
    CHECK(pd->kids[1]->poly ==
          parse_polynomial("1 - r12^2 - r13^2 - r23^2 + 2*r12*r13*r23", o));

    std::map<std::string, Rational> zero{{"r12", Rational(0)}, {"r13", Rational(0)},
                                         {"r23", Rational(0)}};
    CHECK(evaluate_qf(pd, zero));
    std::map<std::string, Rational> degenerate{{"r12", Rational(1)}, {"r13", Rational(0)},
                                               {"r23", Rational(0)}};
    CHECK_FALSE(evaluate_qf(pd, degenerate));
    std::map<std::string, Rational> skew{{"r12", make_rational(9, 10)},
                                         {"r13", make_rational(-9, 10)},
                                         {"r23", make_rational(9, 10)}};
    CHECK_FALSE(evaluate_qf(pd, skew));
}

TEST_CASE("membership of CI implications in the Gaussian theory") {
    // r12 = 0 and r12 - r13*r23 = 0 force r13 = 0 or r23 = 0
    FormulaPtr yes = membership_sentence({{{1}, {2}, {}}, {{1}, {2}, {3}}},
                                         {{{1}, {3}, {}}, {{2}, {3}, {}}}, 3);
    CHECK(free_variables(yes).empty());
    CHECK(decide(yes).value);

    // marginal independence of 1,2 says nothing about 1,3
    FormulaPtr no = membership_sentence({{{1}, {2}, {}}}, {{{1}, {3}, {}}}, 3);
    Decision d = decide(no);
    CHECK_FALSE(d.value);

    CHECK_THROWS_AS(membership_sentence({{{1}, {2}, {}}}, {}, 3), usage_error);
}

TEST_CASE("built-in models evaluate their maps correctly") {
    PolynomialModel corr = built_in_model("heywood-corr");
    corr.validate();
    CHECK(corr.observables == std::vector<std::string>{"r12", "r13", "r23"});
    std::map<int, Rational> beta{{0, Rational(1)}, {1, Rational(2)}, {2, Rational(3)}};
    CHECK(corr.map[0].eval_all(beta) == Rational(2));
    CHECK(corr.map[1].eval_all(beta) == Rational(3));
    CHECK(corr.map[2].eval_all(beta) == Rational(6));

    PolynomialModel cov = built_in_model("heywood-cov");
    cov.validate();
    REQUIRE(cov.params.size() == 7);
    REQUIRE(cov.map.size() == 6);
    std::map<int, Rational> ones;
    for (int i = 0; i < 7; ++i) ones[i] = Rational(1);
    for (int j = 0; j < 3; ++j) CHECK(cov.map[j].eval_all(ones) == Rational(2));
    for (int j = 3; j < 6; ++j) CHECK(cov.map[j].eval_all(ones) == Rational(1));
    // the variance positivity constraints reject a zero error variance
    std::map<std::string, Rational> bad{{"eH", Rational(1)}, {"e1", Rational(0)},
                                        {"e2", Rational(1)}, {"e3", Rational(1)},
                                        {"b1", Rational(1)}, {"b2", Rational(1)},
                                        {"b3", Rational(1)}};
    CHECK_FALSE(evaluate_qf(cov.constraint, bad));

    PolynomialModel complete = built_in_model("gaussian-complete-3");
    complete.validate();
    CHECK(complete.constraint->kind == FKind::True);
    CHECK(complete.map[0] == Polynomial::variable(complete.param_order(), 0));

    CHECK_THROWS_AS(built_in_model("no-such-model"), usage_error);
}

TEST_CASE("implicitization of small parameterizations") {
    // the diagonal: image of t -> (t, t) is exactly x = y
    PolynomialModel diag;
    diag.params = {"t"};
    diag.constraint = f_true();
    diag.observables = {"x", "y"};
    VarOrderPtr o = diag.param_order();
    diag.map = {Polynomial::variable(o, 0), Polynomial::variable(o, 0)};
    FormulaPtr region = eliminate(implicitization_formula(diag));
    for (int x = -3; x <= 3; ++x)
        for (int y = -3; y <= 3; ++y) {
            std::map<std::string, Rational> pt{{"x", Rational(x)}, {"y", Rational(y)}};
            CHECK(evaluate_qf(region, pt) == (x == y));
        }

    // the half line: image of t -> t^2 is x >= 0
    PolynomialModel square;
    square.params = {"t"};
    square.constraint = f_true();
    square.observables = {"x"};
    square.map = {parse_polynomial("t^2", square.param_order())};
    FormulaPtr half = eliminate(implicitization_formula(square));
    CHECK(render(half) == "x >= 0");
}

TEST_CASE("implicitized region contains every forward image point") {
    PolynomialModel m = built_in_model("heywood-corr");
    FormulaPtr region = eliminate(implicitization_formula(m));
    std::set<std::string> obs(m.observables.begin(), m.observables.end());
    for (const std::string& v : free_variables(region)) CHECK(obs.count(v) == 1);
    std::mt19937 rng(61);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 3);
    for (int round = 0; round < 200; ++round) {
        std::map<int, Rational> beta;
        for (int i = 0; i < 3; ++i) beta[i] = make_rational(num(rng), den(rng));
        std::map<std::string, Rational> image;
        for (std::size_t j = 0; j < m.map.size(); ++j)
            image[m.observables[j]] = m.map[j].eval_all(beta);
        CHECK(evaluate_qf(region, image));
    }
    // and rejects a point with inconsistent pairwise products
    std::map<std::string, Rational> off{{"r12", Rational(1)}, {"r13", Rational(1)},
                                        {"r23", Rational(-1)}};
    CHECK_FALSE(evaluate_qf(region, off));
}

TEST_CASE("model comparison on toy models") {
    PolynomialModel diag;
    diag.params = {"t"};
    diag.constraint = f_true();
    diag.observables = {"x", "y"};
    VarOrderPtr o = diag.param_order();
    diag.map = {Polynomial::variable(o, 0), Polynomial::variable(o, 0)};

    PolynomialModel plane;
    plane.params = {"u", "v"};
    plane.constraint = f_true();
    plane.observables = {"x", "y"};
    VarOrderPtr po = plane.param_order();
    plane.map = {Polynomial::variable(po, 0), Polynomial::variable(po, 1)};

    CHECK(decide(model_compare_sentence(diag, plane, CompareMode::Inclusion)).value);
    CHECK_FALSE(decide(model_compare_sentence(plane, diag, CompareMode::Inclusion)).value);
    CHECK_FALSE(decide(model_compare_sentence(diag, plane, CompareMode::Equality)).value);
    CHECK(decide(model_compare_sentence(diag, diag, CompareMode::Equality)).value);
    CHECK(decide(model_compare_sentence(plane, diag, CompareMode::Overlap)).value);

    PolynomialModel triple = built_in_model("heywood-corr");
    CHECK_THROWS_AS(model_compare_sentence(diag, triple, CompareMode::Inclusion),
                    usage_error);
}

TEST_CASE("comparison renames clashing parameters apart") {
    PolynomialModel a;
    a.params = {"t"};
    a.constraint = f_true();
    a.observables = {"x"};
    a.map = {Polynomial::variable(a.param_order(), 0)};
    FormulaPtr s = model_compare_sentence(a, a, CompareMode::Inclusion);
    CHECK(s->kind == FKind::Forall);
    CHECK(s->var == "t");
    CHECK(s->kids[0]->kind == FKind::Exists);
    CHECK(s->kids[0]->var == "t'");
    CHECK(decide(s).value);
}

TEST_CASE("identifiability of quantities") {
    PolynomialModel square;
    square.params = {"t"};
    square.constraint = f_true();
    square.observables = {"x"};
    VarOrderPtr o = square.param_order();
    square.map = {parse_polynomial("t^2", o)};

    // t itself is not identified from t^2 (sign flip), but t^2 is
    Decision not_id = decide(identifiability_sentence(square, {Polynomial::variable(o, 0)}));
    CHECK_FALSE(not_id.value);
    CHECK(not_id.witness.has_value());
    CHECK(decide(identifiability_sentence(square, {parse_polynomial("t^2", o)})).value);
}

TEST_CASE("quantity region of a constrained parameter") {
    PolynomialModel m;
    m.params = {"t"};
    m.constraint = parse("t > 0");
    m.observables = {"x"};
    VarOrderPtr o = m.param_order();
    m.map = {Polynomial::variable(o, 0)};

    FormulaPtr region = quantity_region_formula(m, parse_polynomial("t^2", o));
    CHECK(free_variables(region) == std::vector<std::string>{"r"});
    FormulaPtr answer = eliminate(region);
    CHECK(render(answer) == "r > 0");

    // a parameter named r pushes the free variable to r'
    PolynomialModel clash;
    clash.params = {"r"};
    clash.constraint = f_true();
    clash.observables = {"x"};
    clash.map = {Polynomial::variable(clash.param_order(), 0)};
    FormulaPtr region2 =
        quantity_region_formula(clash, Polynomial::variable(clash.param_order(), 0));
    CHECK(free_variables(region2) == std::vector<std::string>{"r'"});
}

TEST_CASE("model text parsing") {
    PolynomialModel m = parse_model(R"(
        # one hidden factor, three indicators
        params: b1 b2 b3
        observables: r12 r13 r23
        map: b1*b2, b1*b3,
             b2*b3
    )");
    CHECK(m.params == std::vector<std::string>{"b1", "b2", "b3"});
    CHECK(m.constraint->kind == FKind::True);
    REQUIRE(m.map.size() == 3);
    PolynomialModel builtin = built_in_model("heywood-corr");
    for (int i = 0; i < 3; ++i) CHECK(m.map[i] == builtin.map[i]);

    PolynomialModel c = parse_model(
        "params: a b\nconstraint: a > 0 and\n b > 0\nobservables: x\nmap: a*b");
    CHECK(evaluate_qf(c.constraint, {{"a", Rational(1)}, {"b", Rational(2)}}));
    CHECK_FALSE(evaluate_qf(c.constraint, {{"a", Rational(1)}, {"b", Rational(-2)}}));

    CHECK_THROWS_AS(parse_model("params: a\nmap: a"), usage_error);
    CHECK_THROWS_AS(parse_model("junk before headers"), usage_error);
    CHECK_THROWS_AS(parse_model("params: a\nobservables: x y\nmap: a"), usage_error);
    CHECK_THROWS_AS(parse_model("params: a\nobservables: x\nmap: a*q"), usage_error);
    CHECK_THROWS_AS(parse_model("params: a\nconstraint: q > 0\nobservables: x\nmap: a"),
                    usage_error);
}
