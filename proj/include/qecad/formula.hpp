#ifndef QECAD_FORMULA_HPP
#define QECAD_FORMULA_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qecad/polynomial.hpp"

namespace qecad {

enum class Rel { Eq, Ne, Lt, Le, Gt, Ge };

inline const char* rel_text(Rel r) {
    switch (r) {
        case Rel::Eq: return "=";
        case Rel::Ne: return "!=";
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Gt: return ">";
        case Rel::Ge: return ">=";
    }
    return "?";
}

inline bool rel_holds(Rel r, int sign) {
    switch (r) {
        case Rel::Eq: return sign == 0;
        case Rel::Ne: return sign != 0;
        case Rel::Lt: return sign < 0;
        case Rel::Le: return sign <= 0;
        case Rel::Gt: return sign > 0;
        case Rel::Ge: return sign >= 0;
    }
    return false;
}

enum class FKind { True, False, Atom, And, Or, Not, Implies, Iff, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// AST node of L_R: atoms are always in "p rel 0" form.
struct Formula {
    FKind kind;
    Rel rel = Rel::Eq;       // Atom only
    Polynomial poly;         // Atom only
    std::string var;         // Forall/Exists only
    std::vector<FormulaPtr> kids;
};

inline FormulaPtr f_true() {
    return std::make_shared<Formula>(Formula{FKind::True});
}
inline FormulaPtr f_false() {
    return std::make_shared<Formula>(Formula{FKind::False});
}
inline FormulaPtr f_bool(bool b) { return b ? f_true() : f_false(); }
inline FormulaPtr f_atom(Polynomial p, Rel r) {
    Formula f{FKind::Atom};
    f.rel = r;
    f.poly = std::move(p);
    return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_node(FKind k, FormulaPtr a, FormulaPtr b) {
    Formula f{k};
    f.kids = {std::move(a), std::move(b)};
    return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
    return f_node(FKind::And, std::move(a), std::move(b));
}
inline FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
    return f_node(FKind::Or, std::move(a), std::move(b));
}
inline FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    return f_node(FKind::Implies, std::move(a), std::move(b));
}
inline FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
    return f_node(FKind::Iff, std::move(a), std::move(b));
}
inline FormulaPtr f_not(FormulaPtr a) {
    Formula f{FKind::Not};
    f.kids = {std::move(a)};
    return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_quant(FKind k, std::string var, FormulaPtr body) {
    Formula f{k};
    f.var = std::move(var);
    f.kids = {std::move(body)};
    return std::make_shared<Formula>(std::move(f));
}
inline FormulaPtr f_forall(std::string var, FormulaPtr body) {
    return f_quant(FKind::Forall, std::move(var), std::move(body));
}
inline FormulaPtr f_exists(std::string var, FormulaPtr body) {
    return f_quant(FKind::Exists, std::move(var), std::move(body));
}

// Short-circuit constructors used by substitution and output assembly.
inline FormulaPtr mk_and(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind == FKind::False || b->kind == FKind::False) return f_false();
    if (a->kind == FKind::True) return b;
    if (b->kind == FKind::True) return a;
    return f_and(a, b);
}
inline FormulaPtr mk_or(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind == FKind::True || b->kind == FKind::True) return f_true();
    if (a->kind == FKind::False) return b;
    if (b->kind == FKind::False) return a;
    return f_or(a, b);
}

// Structural equality, insensitive to the variable-order handle of atoms.
inline bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a->kind != b->kind) return false;
    if (a->kind == FKind::Atom) {
        if (a->rel != b->rel) return false;
        try {
            return a->poly.reorder(b->poly.order()) == b->poly;
        } catch (const usage_error&) {
            return false;
        }
    }
    if (a->var != b->var) return false;
    if (a->kids.size() != b->kids.size()) return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!formula_equal(a->kids[i], b->kids[i])) return false;
    return true;
}

namespace detail {

inline void collect_variables(const FormulaPtr& f, std::set<std::string>& bound,
                              std::vector<std::string>& free_order,
                              std::set<std::string>& free_seen,
                              std::set<std::string>& all) {
    switch (f->kind) {
        case FKind::Atom:
            for (const auto& [e, c] : f->poly.terms())
                for (std::size_t i = 0; i < e.size(); ++i) {
                    if (e[i] == 0) continue;
                    const std::string& n = f->poly.order()->name(i);
                    all.insert(n);
                    if (!bound.count(n) && !free_seen.count(n)) {
                        free_seen.insert(n);
                        free_order.push_back(n);
                    }
                }
            return;
        case FKind::Forall:
        case FKind::Exists: {
            all.insert(f->var);
            bool was_bound = bound.count(f->var) > 0;
            bound.insert(f->var);
            collect_variables(f->kids[0], bound, free_order, free_seen, all);
            if (!was_bound) bound.erase(f->var);
            return;
        }
        default:
            for (const auto& k : f->kids)
                collect_variables(k, bound, free_order, free_seen, all);
            return;
    }
}

}  // namespace detail

// Free variables in first-appearance order.
inline std::vector<std::string> free_variables(const FormulaPtr& f) {
    std::set<std::string> bound, seen, all;
    std::vector<std::string> order;
    detail::collect_variables(f, bound, order, seen, all);
    return order;
}

inline std::set<std::string> all_variables(const FormulaPtr& f) {
    std::set<std::string> bound, seen, all;
    std::vector<std::string> order;
    detail::collect_variables(f, bound, order, seen, all);
    return all;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

enum class Tok {
    End, Ident, Number, LParen, RParen, Plus, Minus, Star, Caret,
    Lt, Le, Gt, Ge, Eq, Ne, Arrow, DArrow, Dot,
    KwForall, KwExists, KwAnd, KwOr, KwNot, KwTrue, KwFalse
};

struct Token {
    Tok kind;
    std::string text;
    int line = 1, col = 1;
};

struct Lexer {
    explicit Lexer(const std::string& src) {
        int line = 1, col = 1;
        std::size_t i = 0;
        auto step = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k) {
                if (src[i + k] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            i += n;
        };
        while (i < src.size()) {
            char c = src[i];
            if (c == '#') {
                while (i < src.size() && src[i] != '\n') step(1);
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                step(1);
                continue;
            }
            Token t;
            t.line = line;
            t.col = col;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                          src[j] == '_' || src[j] == '\''))
                    ++j;
                t.text = src.substr(i, j - i);
                if (t.text == "forall") t.kind = Tok::KwForall;
                else if (t.text == "exists") t.kind = Tok::KwExists;
                else if (t.text == "and") t.kind = Tok::KwAnd;
                else if (t.text == "or") t.kind = Tok::KwOr;
                else if (t.text == "not") t.kind = Tok::KwNot;
                else if (t.text == "true") t.kind = Tok::KwTrue;
                else if (t.text == "false") t.kind = Tok::KwFalse;
                else t.kind = Tok::Ident;
                step(j - i);
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t j = i;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                // rational literal p/q
                if (j < src.size() && src[j] == '/' && j + 1 < src.size() &&
                    std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                    ++j;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                        ++j;
                }
                t.kind = Tok::Number;
                t.text = src.substr(i, j - i);
                step(j - i);
            } else {
                auto two = src.substr(i, 2);
                if (src.compare(i, 3, "<->") == 0) { t.kind = Tok::DArrow; step(3); }
                else if (two == "->") { t.kind = Tok::Arrow; step(2); }
                else if (two == "<=") { t.kind = Tok::Le; step(2); }
                else if (two == ">=") { t.kind = Tok::Ge; step(2); }
                else if (two == "!=") { t.kind = Tok::Ne; step(2); }
                else if (two == "/=") { t.kind = Tok::Ne; step(2); }
                else switch (c) {
                    case '(': t.kind = Tok::LParen; step(1); break;
                    case ')': t.kind = Tok::RParen; step(1); break;
                    case '+': t.kind = Tok::Plus; step(1); break;
                    case '-': t.kind = Tok::Minus; step(1); break;
                    case '*': t.kind = Tok::Star; step(1); break;
                    case '^': t.kind = Tok::Caret; step(1); break;
                    case '<': t.kind = Tok::Lt; step(1); break;
                    case '>': t.kind = Tok::Gt; step(1); break;
                    case '=': t.kind = Tok::Eq; step(1); break;
                    case '.': t.kind = Tok::Dot; step(1); break;
                    default:
                        throw usage_error("syntax error at line " + std::to_string(line) +
                                          ", column " + std::to_string(col) +
                                          ": unexpected character '" + std::string(1, c) + "'");
                }
            }
            tokens.push_back(std::move(t));
        }
        Token end;
        end.kind = Tok::End;
        end.line = line;
        end.col = col;
        tokens.push_back(end);
    }

    std::vector<Token> tokens;
};

struct Parser {
    const std::vector<Token>& toks;
    std::size_t pos = 0;
    VarOrderPtr order;

    Parser(const std::vector<Token>& t, VarOrderPtr o) : toks(t), order(std::move(o)) {}

    const Token& peek(std::size_t ahead = 0) const {
        return toks[std::min(pos + ahead, toks.size() - 1)];
    }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        throw usage_error("syntax error at line " + std::to_string(t.line) + ", column " +
                          std::to_string(t.col) + ": " + what);
    }
    void expect(Tok k, const std::string& what) {
        if (!accept(k)) fail(what);
    }

    FormulaPtr parse_formula() { return parse_iff(); }

    FormulaPtr parse_iff() {
        FormulaPtr f = parse_implies();
        while (accept(Tok::DArrow)) f = f_iff(f, parse_implies());
        return f;
    }

    FormulaPtr parse_implies() {
        FormulaPtr f = parse_or();
        if (accept(Tok::Arrow)) return f_implies(f, parse_implies());
        return f;
    }

    FormulaPtr parse_or() {
        FormulaPtr f = parse_and();
        while (accept(Tok::KwOr)) f = f_or(f, parse_and());
        return f;
    }

    FormulaPtr parse_and() {
        FormulaPtr f = parse_unary();
        while (accept(Tok::KwAnd)) f = f_and(f, parse_unary());
        return f;
    }

    FormulaPtr parse_unary() {
        if (accept(Tok::KwNot)) return f_not(parse_unary());
        if (peek().kind == Tok::KwForall || peek().kind == Tok::KwExists)
            return parse_quantifier(false);
        // "(forall x) body" prefix form; "(forall x. body)" is handled as an
        // ordinary parenthesized formula by parse_primary
        if (peek().kind == Tok::LParen &&
            (peek(1).kind == Tok::KwForall || peek(1).kind == Tok::KwExists) &&
            peek(2).kind == Tok::Ident && peek(3).kind == Tok::RParen) {
            ++pos;  // '('
            return parse_quantifier(true);
        }
        return parse_primary();
    }

    FormulaPtr parse_quantifier(bool parenthesized) {
        FKind k = peek().kind == Tok::KwForall ? FKind::Forall : FKind::Exists;
        ++pos;
        if (peek().kind != Tok::Ident) fail("expected variable after quantifier");
        std::string var = peek().text;
        ++pos;
        if (parenthesized)
            expect(Tok::RParen, "expected ')' after quantified variable");
        else
            accept(Tok::Dot);  // optional '.'
        // The body extends as far as possible.
        return f_quant(k, std::move(var), parse_iff());
    }

    FormulaPtr parse_primary() {
        if (accept(Tok::KwTrue)) return f_true();
        if (accept(Tok::KwFalse)) return f_false();
        // Try an atom first; fall back to a parenthesized formula.
        std::size_t save = pos;
        try {
            return parse_atom();
        } catch (const usage_error&) {
            pos = save;
        }
        if (accept(Tok::LParen)) {
            FormulaPtr f = parse_formula();
            expect(Tok::RParen, "expected ')'");
            return f;
        }
        fail("expected formula");
    }

    FormulaPtr parse_atom() {
        Polynomial lhs = parse_term();
        Rel r;
        switch (peek().kind) {
            case Tok::Eq: r = Rel::Eq; break;
            case Tok::Ne: r = Rel::Ne; break;
            case Tok::Lt: r = Rel::Lt; break;
            case Tok::Le: r = Rel::Le; break;
            case Tok::Gt: r = Rel::Gt; break;
            case Tok::Ge: r = Rel::Ge; break;
            default: fail("expected relation symbol");
        }
        ++pos;
        Polynomial rhs = parse_term();
        return f_atom(lhs - rhs, r);
    }

    Polynomial parse_term() {
        Polynomial t = parse_mul();
        while (true) {
            if (accept(Tok::Plus)) t = t + parse_mul();
            else if (accept(Tok::Minus)) t = t - parse_mul();
            else return t;
        }
    }

    Polynomial parse_mul() {
        Polynomial t = parse_factor();
        while (accept(Tok::Star)) t = t * parse_factor();
        return t;
    }

    Polynomial parse_factor() {
        if (accept(Tok::Minus)) return -parse_factor();
        Polynomial base = parse_base();
        if (accept(Tok::Caret)) {
            if (peek().kind != Tok::Number || peek().text.find('/') != std::string::npos)
                fail("expected integer exponent");
            unsigned long e = std::stoul(peek().text);
            ++pos;
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    Polynomial parse_base() {
        if (peek().kind == Tok::Number) {
            Rational r = parse_rational(peek().text);
            ++pos;
            return Polynomial::constant(order, r);
        }
        if (peek().kind == Tok::Ident) {
            int idx = order->index_of(peek().text);
            if (idx < 0) fail("unknown variable " + peek().text);
            ++pos;
            return Polynomial::variable(order, idx);
        }
        if (accept(Tok::LParen)) {
            Polynomial t = parse_term();
            expect(Tok::RParen, "expected ')' in term");
            return t;
        }
        fail("expected term");
    }
};

}  // namespace detail

// Parse a formula from text. All atoms share one variable order listing the
// identifiers of the text in first-appearance order.
inline FormulaPtr parse(const std::string& text) {
    detail::Lexer lex(text);
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& t : lex.tokens)
        if (t.kind == detail::Tok::Ident && !seen.count(t.text)) {
            seen.insert(t.text);
            names.push_back(t.text);
        }
    detail::Parser p(lex.tokens, make_order(std::move(names)));
    FormulaPtr f = p.parse_formula();
    if (p.peek().kind != detail::Tok::End) p.fail("trailing input");
    return f;
}

// Parse a bare polynomial expression over a fixed variable order.
inline Polynomial parse_polynomial(const std::string& text, const VarOrderPtr& order) {
    detail::Lexer lex(text);
    detail::Parser p(lex.tokens, order);
    Polynomial t = p.parse_term();
    if (p.peek().kind != detail::Tok::End) p.fail("trailing input");
    return t;
}

// ---------------------------------------------------------------------------
// Rendering (deterministic; parse(render(f)) is structurally f)

namespace detail {

inline int precedence(FKind k) {
    switch (k) {
        case FKind::Forall:
        case FKind::Exists: return 0;
        case FKind::Iff: return 1;
        case FKind::Implies: return 2;
        case FKind::Or: return 3;
        case FKind::And: return 4;
        case FKind::Not: return 5;
        default: return 6;
    }
}

inline void render_rec(const FormulaPtr& f, int parent_prec, std::string& out) {
    int prec = precedence(f->kind);
    bool wrap = prec < parent_prec;
    if (wrap) out += "(";
    switch (f->kind) {
        case FKind::True: out += "true"; break;
        case FKind::False: out += "false"; break;
        case FKind::Atom:
            out += f->poly.to_string();
            out += " ";
            out += rel_text(f->rel);
            out += " 0";
            break;
        case FKind::Not:
            out += "not ";
            render_rec(f->kids[0], precedence(FKind::Not), out);
            break;
        case FKind::And:
            render_rec(f->kids[0], prec, out);
            out += " and ";
            render_rec(f->kids[1], prec + 1, out);
            break;
        case FKind::Or:
            render_rec(f->kids[0], prec, out);
            out += " or ";
            render_rec(f->kids[1], prec + 1, out);
            break;
        case FKind::Implies:
            render_rec(f->kids[0], prec + 1, out);
            out += " -> ";
            render_rec(f->kids[1], prec, out);
            break;
        case FKind::Iff:
            render_rec(f->kids[0], prec, out);
            out += " <-> ";
            render_rec(f->kids[1], prec + 1, out);
            break;
        case FKind::Forall:
        case FKind::Exists:
            out += f->kind == FKind::Forall ? "forall " : "exists ";
            out += f->var;
            out += ". ";
            render_rec(f->kids[0], 0, out);
            break;
    }
    if (wrap) out += ")";
}

}  // namespace detail

inline std::string render(const FormulaPtr& f) {
    std::string out;
    detail::render_rec(f, 0, out);
    return out;
}

// ---------------------------------------------------------------------------
// Substitution and quantifier-free evaluation

inline FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Rational>& b) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atom: {
            std::map<int, Rational> idx;
            for (const auto& [name, val] : b) {
                int i = f->poly.order()->index_of(name);
                if (i >= 0) idx[i] = val;
            }
            Polynomial p = f->poly.eval(idx);
            if (p.is_constant()) return f_bool(rel_holds(f->rel, sign_of(p.constant_value())));
            return f_atom(std::move(p), f->rel);
        }
        case FKind::Not: {
            FormulaPtr k = substitute(f->kids[0], b);
            if (k->kind == FKind::True) return f_false();
            if (k->kind == FKind::False) return f_true();
            return f_not(k);
        }
        case FKind::And: return mk_and(substitute(f->kids[0], b), substitute(f->kids[1], b));
        case FKind::Or: return mk_or(substitute(f->kids[0], b), substitute(f->kids[1], b));
        case FKind::Implies: {
            FormulaPtr l = substitute(f->kids[0], b), r = substitute(f->kids[1], b);
            if (l->kind == FKind::False || r->kind == FKind::True) return f_true();
            if (l->kind == FKind::True) return r;
            return f_implies(l, r);
        }
        case FKind::Iff: {
            FormulaPtr l = substitute(f->kids[0], b), r = substitute(f->kids[1], b);
            if (l->kind == FKind::True) return r;
            if (r->kind == FKind::True) return l;
            if (l->kind == FKind::False && r->kind == FKind::False) return f_true();
            return f_iff(l, r);
        }
        case FKind::Forall:
        case FKind::Exists:
            if (b.count(f->var)) throw usage_error("substitute: variable " + f->var + " is bound");
            return f_quant(f->kind, f->var, substitute(f->kids[0], b));
    }
    throw usage_error("substitute: bad node");
}

// ---------------------------------------------------------------------------
// Prenex normal form

enum class Quant { Forall, Exists };

// Quantifier prefix plus a matrix of and/or over atoms restricted to
// {<, =, >}. The order places free variables first, then prefix variables
// outermost to innermost; matrix polynomials are rebuilt over it.
struct PrenexFormula {
    std::vector<std::pair<Quant, std::string>> prefix;
    FormulaPtr matrix;
    VarOrderPtr order;
    std::size_t free_count = 0;
};

namespace detail {

inline std::string fresh_name(const std::string& base, std::set<std::string>& used) {
    if (!used.count(base)) {
        used.insert(base);
        return base;
    }
    for (int k = 1;; ++k) {
        std::string cand = base + "_" + std::to_string(k);
        if (!used.count(cand)) {
            used.insert(cand);
            return cand;
        }
    }
}

inline Polynomial rename_poly(const Polynomial& p,
                              const std::map<std::string, std::string>& ren) {
    bool touched = false;
    std::vector<std::string> names = p.order()->names();
    for (auto& n : names) {
        auto it = ren.find(n);
        if (it != ren.end()) {
            n = it->second;
            touched = true;
        }
    }
    if (!touched) return p;
    Polynomial r(make_order(std::move(names)));
    for (const auto& [e, c] : p.terms()) r = r + Polynomial::monomial(r.order(), e, c);
    return r;
}

// Rename quantified variables so every binder introduces a globally fresh
// name distinct from all free variables.
inline FormulaPtr rename_bound(const FormulaPtr& f, std::map<std::string, std::string> ren,
                               std::set<std::string>& used) {
    switch (f->kind) {
        case FKind::True:
        case FKind::False: return f;
        case FKind::Atom: {
            Polynomial p = rename_poly(f->poly, ren);
            return p == f->poly ? f : f_atom(std::move(p), f->rel);
        }
        case FKind::Forall:
        case FKind::Exists: {
            std::string fresh = fresh_name(f->var, used);
            if (fresh != f->var) ren[f->var] = fresh;
            else ren.erase(f->var);
            return f_quant(f->kind, fresh, rename_bound(f->kids[0], ren, used));
        }
        default: {
            Formula g{f->kind};
            g.var = f->var;
            for (const auto& k : f->kids) g.kids.push_back(rename_bound(k, ren, used));
            return std::make_shared<Formula>(std::move(g));
        }
    }
}

// Negation normal form with iff/implies expanded and every atom reduced to
// {<, =, >}: not(p > 0) becomes p = 0 or p < 0, and so on.
inline FormulaPtr nnf(const FormulaPtr& f, bool positive) {
    switch (f->kind) {
        case FKind::True: return f_bool(positive);
        case FKind::False: return f_bool(!positive);
        case FKind::Atom: {
            Rel r = f->rel;
            if (!positive) {
                switch (r) {
                    case Rel::Eq: r = Rel::Ne; break;
                    case Rel::Ne: r = Rel::Eq; break;
                    case Rel::Lt: r = Rel::Ge; break;
                    case Rel::Ge: r = Rel::Lt; break;
                    case Rel::Gt: r = Rel::Le; break;
                    case Rel::Le: r = Rel::Gt; break;
                }
            }
            switch (r) {
                case Rel::Ne:
                    return f_or(f_atom(f->poly, Rel::Lt), f_atom(f->poly, Rel::Gt));
                case Rel::Le:
                    return f_or(f_atom(f->poly, Rel::Lt), f_atom(f->poly, Rel::Eq));
                case Rel::Ge:
                    return f_or(f_atom(f->poly, Rel::Gt), f_atom(f->poly, Rel::Eq));
                default: return f_atom(f->poly, r);
            }
        }
        case FKind::Not: return nnf(f->kids[0], !positive);
        case FKind::And:
            return f_node(positive ? FKind::And : FKind::Or, nnf(f->kids[0], positive),
                          nnf(f->kids[1], positive));
        case FKind::Or:
            return f_node(positive ? FKind::Or : FKind::And, nnf(f->kids[0], positive),
                          nnf(f->kids[1], positive));
        case FKind::Implies:
            return f_node(positive ? FKind::Or : FKind::And, nnf(f->kids[0], !positive),
                          nnf(f->kids[1], positive));
        case FKind::Iff:
            // expand before pushing the negation through
            return nnf(f_or(f_and(f->kids[0], f->kids[1]),
                            f_and(f_not(f->kids[0]), f_not(f->kids[1]))),
                       positive);
        case FKind::Forall:
            return f_quant(positive ? FKind::Forall : FKind::Exists, f->var,
                           nnf(f->kids[0], positive));
        case FKind::Exists:
            return f_quant(positive ? FKind::Exists : FKind::Forall, f->var,
                           nnf(f->kids[0], positive));
    }
    throw usage_error("nnf: bad node");
}

inline FormulaPtr pull_quantifiers(const FormulaPtr& f,
                                   std::vector<std::pair<Quant, std::string>>& prefix) {
    switch (f->kind) {
        case FKind::Forall:
        case FKind::Exists:
            prefix.emplace_back(f->kind == FKind::Forall ? Quant::Forall : Quant::Exists,
                                f->var);
            return pull_quantifiers(f->kids[0], prefix);
        case FKind::And:
        case FKind::Or: {
            FormulaPtr l = pull_quantifiers(f->kids[0], prefix);
            FormulaPtr r = pull_quantifiers(f->kids[1], prefix);
            return f_node(f->kind, std::move(l), std::move(r));
        }
        default: return f;
    }
}

inline FormulaPtr reorder_atoms(const FormulaPtr& f, const VarOrderPtr& order) {
    switch (f->kind) {
        case FKind::Atom: return f_atom(f->poly.reorder(order), f->rel);
        case FKind::True:
        case FKind::False: return f;
        default: {
            Formula g{f->kind};
            g.var = f->var;
            for (const auto& k : f->kids) g.kids.push_back(reorder_atoms(k, order));
            return std::make_shared<Formula>(std::move(g));
        }
    }
}

}  // namespace detail

// Logically equivalent prenex form. free_order, when given, must list every
// free variable; it becomes the leading block of the CAD variable order.
inline PrenexFormula to_prenex(const FormulaPtr& f,
                               std::vector<std::string> free_order = {}) {
    std::vector<std::string> free_vars = free_variables(f);
    if (free_order.empty()) {
        free_order = free_vars;
    } else {
        for (const auto& v : free_vars)
            if (std::find(free_order.begin(), free_order.end(), v) == free_order.end())
                throw usage_error("free_order misses free variable " + v);
    }
    // Expand iff/implies first: the expansion duplicates subformulas, so the
    // binders must be freshened afterwards or the copies would share names.
    std::set<std::string> used(free_order.begin(), free_order.end());
    FormulaPtr expanded = detail::nnf(f, true);
    FormulaPtr normal = detail::rename_bound(expanded, {}, used);

    PrenexFormula out;
    out.matrix = detail::pull_quantifiers(normal, out.prefix);
    out.free_count = free_order.size();
    std::vector<std::string> names = std::move(free_order);
    for (const auto& [q, v] : out.prefix) names.push_back(v);
    out.order = make_order(std::move(names));
    out.matrix = detail::reorder_atoms(out.matrix, out.order);
    return out;
}

}  // namespace qecad

#endif  // QECAD_FORMULA_HPP
