#ifndef QECAD_STATS_HPP
#define QECAD_STATS_HPP

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qecad/formula.hpp"
#include "qecad/resultant.hpp"

namespace qecad {

// A parameterized family of observable vectors: the image of the parameter
// region (constraint) under the polynomial map, one polynomial per
// observable. Map polynomials live over the params order.
struct PolynomialModel {
    std::vector<std::string> params;
    FormulaPtr constraint;  // quantifier-free, over params only
    std::vector<std::string> observables;
    std::vector<Polynomial> map;

    VarOrderPtr param_order() const { return make_order(params); }

    void validate() const {
        if (map.size() != observables.size())
            throw usage_error("model: map and observables differ in length");
        std::set<std::string> ps(params.begin(), params.end());
        for (const auto& v : all_variables(constraint))
            if (!ps.count(v)) throw usage_error("model: constraint mentions non-param " + v);
        for (const auto& p : map)
            for (std::size_t i = 0; i < p.order()->size(); ++i)
                if (p.contains_variable(static_cast<int>(i)) && !ps.count(p.order()->name(i)))
                    throw usage_error("model: map mentions non-param " + p.order()->name(i));
    }
};

// Conditional independence of two observed Gaussian variables given a
// (possibly empty) conditioning set, all named by 1-based indices.
struct CiStatement {
    std::set<int> left, right, given;
};

inline std::string correlation_name(int i, int j) {
    if (i > j) std::swap(i, j);
    if (j <= 9) return "r" + std::to_string(i) + std::to_string(j);
    return "r" + std::to_string(i) + "_" + std::to_string(j);
}

// All distinct off-diagonal correlation symbols of an n x n matrix,
// row-major over the upper triangle.
inline VarOrderPtr correlation_order(int n) {
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) names.push_back(correlation_name(i, j));
    return make_order(std::move(names));
}

namespace detail {

inline Polynomial correlation_entry(const VarOrderPtr& order, int i, int j) {
    if (i == j) return Polynomial::constant(order, Rational(1));
    return Polynomial::variable(order, order->index_of(correlation_name(i, j)));
}

inline void check_ci(const CiStatement& s, int n) {
    if (s.left.size() != 1 || s.right.size() != 1)
        throw usage_error("CI statement needs singleton left and right sets");
    if (s.given.size() > 1)
        throw usage_error("conditioning sets larger than one variable are not supported");
    std::vector<int> all(s.left.begin(), s.left.end());
    all.insert(all.end(), s.right.begin(), s.right.end());
    all.insert(all.end(), s.given.begin(), s.given.end());
    std::set<int> uniq(all.begin(), all.end());
    if (uniq.size() != all.size()) throw usage_error("CI statement sets must be disjoint");
    for (int v : uniq)
        if (v < 1 || v > n) throw usage_error("CI statement index out of range");
}

}  // namespace detail

// Correlation-form CI constraint: marginal independence of i and j is
// r_ij = 0; independence given k is the 2x2 minor r_ij - r_ik * r_kj = 0
// (the conditioned variable has unit variance).
inline FormulaPtr gaussian_constraints(const CiStatement& stmt, int n) {
    detail::check_ci(stmt, n);
    VarOrderPtr order = correlation_order(n);
    int i = *stmt.left.begin();
    int j = *stmt.right.begin();
    Polynomial p = detail::correlation_entry(order, i, j);
    if (!stmt.given.empty()) {
        int k = *stmt.given.begin();
        p = p - detail::correlation_entry(order, i, k) * detail::correlation_entry(order, k, j);
    }
    return f_atom(std::move(p), Rel::Eq);
}

// Strict positive definiteness of the unit-diagonal correlation matrix via
// leading principal minors.
inline FormulaPtr positive_definite_formula(int n) {
    VarOrderPtr order = correlation_order(n);
    FormulaPtr out = f_true();
    for (int m = 2; m <= n; ++m) {
        Matrix minor(static_cast<std::size_t>(m), static_cast<std::size_t>(m), order);
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j)
                minor.at(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) =
                    detail::correlation_entry(order, i, j);
        out = mk_and(out, f_atom(determinant(minor, order), Rel::Gt));
    }
    return out;
}

// Universally closed implication: positive definiteness and the premises
// force at least one conclusion.
inline FormulaPtr membership_sentence(const std::vector<CiStatement>& premises,
                                      const std::vector<CiStatement>& conclusion, int n) {
    if (conclusion.empty()) throw usage_error("membership needs at least one conclusion");
    FormulaPtr lhs = positive_definite_formula(n);
    for (const auto& s : premises) lhs = mk_and(lhs, gaussian_constraints(s, n));
    FormulaPtr rhs = f_false();
    for (const auto& s : conclusion) rhs = mk_or(rhs, gaussian_constraints(s, n));
    FormulaPtr body = f_implies(lhs, rhs);
    VarOrderPtr order = correlation_order(n);
    for (std::size_t i = order->size(); i-- > 0;) body = f_forall(order->name(i), body);
    return body;
}

namespace detail {

inline FormulaPtr rename_formula(const FormulaPtr& f,
                                 const std::map<std::string, std::string>& ren) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atom: return f_atom(rename_poly(f->poly, ren), f->rel);
        case FKind::Forall:
        case FKind::Exists: throw usage_error("model constraint must be quantifier-free");
        default: {
            Formula g{f->kind};
            for (const auto& k : f->kids) g.kids.push_back(rename_formula(k, ren));
            return std::make_shared<Formula>(std::move(g));
        }
    }
}

// A copy of the model whose parameters avoid the given names (primes are
// appended until fresh).
inline PolynomialModel rename_apart(const PolynomialModel& m,
                                    const std::set<std::string>& taken) {
    std::map<std::string, std::string> ren;
    PolynomialModel out = m;
    for (auto& p : out.params) {
        std::string fresh = p;
        while (taken.count(fresh)) fresh += "'";
        if (fresh != p) {
            ren[p] = fresh;
            p = fresh;
        }
    }
    if (ren.empty()) return out;
    out.constraint = rename_formula(out.constraint, ren);
    for (auto& g : out.map) g = rename_poly(g, ren);
    return out;
}

}  // namespace detail

enum class CompareMode { Inclusion, Equality, Overlap };

// Set relations between the observable regions of two models with the same
// observable count. Inclusion: every m1 image point is an m2 image point.
inline FormulaPtr model_compare_sentence(const PolynomialModel& m1, const PolynomialModel& m2,
                                         CompareMode mode) {
    m1.validate();
    m2.validate();
    if (m1.map.size() != m2.map.size())
        throw usage_error("model comparison needs equal observable counts");
    if (mode == CompareMode::Equality)
        return f_and(model_compare_sentence(m1, m2, CompareMode::Inclusion),
                     model_compare_sentence(m2, m1, CompareMode::Inclusion));

    std::set<std::string> taken(m1.params.begin(), m1.params.end());
    PolynomialModel b = detail::rename_apart(m2, taken);

    std::vector<std::string> names = m1.params;
    names.insert(names.end(), b.params.begin(), b.params.end());
    VarOrderPtr order = make_order(names);

    FormulaPtr match = f_true();
    for (std::size_t j = 0; j < m1.map.size(); ++j)
        match = mk_and(match,
                       f_atom(b.map[j].reorder(order) - m1.map[j].reorder(order), Rel::Eq));

    FormulaPtr body;
    if (mode == CompareMode::Inclusion)
        body = f_implies(m1.constraint, mk_and(b.constraint, match));
    else
        body = mk_and(mk_and(m1.constraint, b.constraint), match);

    for (std::size_t i = b.params.size(); i-- > 0;) body = f_exists(b.params[i], body);
    if (mode == CompareMode::Inclusion)
        for (std::size_t i = m1.params.size(); i-- > 0;) body = f_forall(m1.params[i], body);
    else
        for (std::size_t i = m1.params.size(); i-- > 0;) body = f_exists(m1.params[i], body);
    return body;
}

// Whether Q(theta) is pinned down by the observable distribution: two
// parameter points with the same image must agree on every Q component.
inline FormulaPtr identifiability_sentence(const PolynomialModel& m,
                                           const std::vector<Polynomial>& q) {
    m.validate();
    std::set<std::string> taken(m.params.begin(), m.params.end());
    PolynomialModel other = detail::rename_apart(m, taken);

    std::vector<std::string> names = m.params;
    names.insert(names.end(), other.params.begin(), other.params.end());
    VarOrderPtr order = make_order(names);

    std::map<std::string, std::string> ren;
    for (std::size_t i = 0; i < m.params.size(); ++i)
        if (m.params[i] != other.params[i]) ren[m.params[i]] = other.params[i];

    FormulaPtr premise = mk_and(m.constraint, other.constraint);
    for (std::size_t j = 0; j < m.map.size(); ++j)
        premise = mk_and(premise, f_atom(m.map[j].reorder(order) -
                                             other.map[j].reorder(order),
                                         Rel::Eq));
    FormulaPtr conclusion = f_true();
    for (const Polynomial& qc : q) {
        Polynomial qq = detail::rename_poly(qc, ren);
        conclusion = mk_and(conclusion, f_atom(qc.reorder(order) - qq.reorder(order), Rel::Eq));
    }
    FormulaPtr body = f_implies(premise, conclusion);
    for (std::size_t i = other.params.size(); i-- > 0;) body = f_forall(other.params[i], body);
    for (std::size_t i = m.params.size(); i-- > 0;) body = f_forall(m.params[i], body);
    return body;
}

// Image region of a scalar quantity over the model, with one free variable r
// (primed until distinct from the params). Eliminating the params yields the
// bounds on the quantity.
inline FormulaPtr quantity_region_formula(const PolynomialModel& m, const Polynomial& q) {
    m.validate();
    std::string r = "r";
    std::set<std::string> taken(m.params.begin(), m.params.end());
    while (taken.count(r)) r += "'";
    std::vector<std::string> names{r};
    names.insert(names.end(), m.params.begin(), m.params.end());
    VarOrderPtr order = make_order(names);
    FormulaPtr body = mk_and(
        m.constraint,
        f_atom(Polynomial::variable(order, 0) - q.reorder(order), Rel::Eq));
    for (std::size_t i = m.params.size(); i-- > 0;) body = f_exists(m.params[i], body);
    return body;
}

// Existential parameterization of the image: the observables are free and
// eliminate turns this into the model's implied (in)equality constraints.
inline FormulaPtr implicitization_formula(const PolynomialModel& m) {
    m.validate();
    std::vector<std::string> names = m.observables;
    names.insert(names.end(), m.params.begin(), m.params.end());
    VarOrderPtr order = make_order(names);
    FormulaPtr body = m.constraint;
    for (std::size_t j = 0; j < m.map.size(); ++j) {
        Polynomial gamma =
            Polynomial::variable(order, order->index_of(m.observables[j]));
        body = mk_and(body, f_atom(gamma - m.map[j].reorder(order), Rel::Eq));
    }
    for (std::size_t i = m.params.size(); i-- > 0;) body = f_exists(m.params[i], body);
    return body;
}

enum class HeywoodVariant { Correlational, Covariance };

// One hidden factor loading three observed Gaussian variables. The
// correlational variant absorbs the known error variances, so the observable
// correlations are the pairwise products of the loadings.
inline PolynomialModel heywood_model(HeywoodVariant variant) {
    PolynomialModel m;
    if (variant == HeywoodVariant::Correlational) {
        m.params = {"b1", "b2", "b3"};
        m.constraint = f_true();
        m.observables = {"r12", "r13", "r23"};
        VarOrderPtr o = m.param_order();
        Polynomial b1 = Polynomial::variable(o, 0);
        Polynomial b2 = Polynomial::variable(o, 1);
        Polynomial b3 = Polynomial::variable(o, 2);
        m.map = {b1 * b2, b1 * b3, b2 * b3};
        return m;
    }
    m.params = {"eH", "e1", "e2", "e3", "b1", "b2", "b3"};
    m.observables = {"s11", "s22", "s33", "s12", "s13", "s23"};
    VarOrderPtr o = m.param_order();
    Polynomial eH = Polynomial::variable(o, 0);
    std::vector<Polynomial> e{Polynomial::variable(o, 1), Polynomial::variable(o, 2),
                              Polynomial::variable(o, 3)};
    std::vector<Polynomial> b{Polynomial::variable(o, 4), Polynomial::variable(o, 5),
                              Polynomial::variable(o, 6)};
    m.constraint = f_true();
    for (int i = 0; i < 4; ++i)
        m.constraint = mk_and(m.constraint, f_atom(Polynomial::variable(o, i), Rel::Gt));
    m.map = {eH * b[0] * b[0] + e[0], eH * b[1] * b[1] + e[1], eH * b[2] * b[2] + e[2],
             eH * b[0] * b[1], eH * b[0] * b[2], eH * b[1] * b[2]};
    return m;
}

// Saturated 3-variable Gaussian in correlation form: the parameters are the
// correlations themselves.
inline PolynomialModel gaussian_complete_3() {
    PolynomialModel m;
    m.params = {"p12", "p13", "p23"};
    m.constraint = f_true();
    m.observables = {"r12", "r13", "r23"};
    VarOrderPtr o = m.param_order();
    m.map = {Polynomial::variable(o, 0), Polynomial::variable(o, 1),
             Polynomial::variable(o, 2)};
    return m;
}

inline PolynomialModel built_in_model(const std::string& name) {
    if (name == "heywood-corr") return heywood_model(HeywoodVariant::Correlational);
    if (name == "heywood-cov") return heywood_model(HeywoodVariant::Covariance);
    if (name == "gaussian-complete-3") return gaussian_complete_3();
    throw usage_error("unknown built-in model " + name);
}

// Text form of a model:
//   params: b1 b2 b3
//   constraint: b1 > 0 and b2 > 0     (optional, default true)
//   observables: r12 r13 r23
//   map: b1*b2, b1*b3, b2*b3
// '#' starts a comment; a section value may continue on following lines.
inline PolynomialModel parse_model(const std::string& text) {
    std::map<std::string, std::string> sections;
    std::string current;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        bool header = false;
        for (const char* key : {"params:", "constraint:", "observables:", "map:"}) {
            std::string k = key;
            if (line.compare(start, k.size(), k) == 0) {
                current = k.substr(0, k.size() - 1);
                sections[current] += line.substr(start + k.size()) + "\n";
                header = true;
                break;
            }
        }
        if (!header) {
            if (current.empty()) throw usage_error("model text before any section header");
            sections[current] += line + "\n";
        }
    }
    auto words = [](const std::string& s) {
        std::vector<std::string> out;
        std::istringstream ws(s);
        std::string w;
        while (ws >> w) out.push_back(w);
        return out;
    };
    if (!sections.count("params") || !sections.count("observables") || !sections.count("map"))
        throw usage_error("model needs params, observables and map sections");
    PolynomialModel m;
    m.params = words(sections["params"]);
    m.observables = words(sections["observables"]);
    if (m.params.empty()) throw usage_error("model has no parameters");
    m.constraint =
        sections.count("constraint") ? parse(sections["constraint"]) : f_true();
    VarOrderPtr o = m.param_order();
    std::string rest = sections["map"];
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        std::size_t comma = rest.find(',', pos);
        std::string piece = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
        if (piece.find_first_not_of(" \t\r\n") != std::string::npos)
            m.map.push_back(parse_polynomial(piece, o));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    m.validate();
    return m;
}

}  // namespace qecad

#endif  // QECAD_STATS_HPP
