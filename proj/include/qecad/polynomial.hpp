#ifndef QECAD_POLYNOMIAL_HPP
#define QECAD_POLYNOMIAL_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qecad/rational.hpp"
#include "qecad/varorder.hpp"

namespace qecad {

// One non-negative exponent per variable of the ambient order.
using ExpVec = std::vector<unsigned>;

// Sparse multivariate polynomial over Rational with a fixed global
// variable order. The term map holds no zero coefficients, so equality
// of term maps is equality of polynomials. Viewing the polynomial as
// univariate in its highest variable (coefficients_in / from_coefficients)
// gives the recursive representation the projection and resultant code
// build on.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(VarOrderPtr order) : order_(std::move(order)) {}

    static Polynomial zero(VarOrderPtr order) { return Polynomial(std::move(order)); }

    static Polynomial constant(VarOrderPtr order, const Rational& c) {
        Polynomial p(std::move(order));
        if (c != 0) p.terms_[ExpVec(p.order_->size(), 0)] = c;
        return p;
    }

    static Polynomial variable(VarOrderPtr order, int index) {
        Polynomial p(std::move(order));
        if (index < 0 || static_cast<std::size_t>(index) >= p.order_->size())
            throw usage_error("variable index out of range");
        ExpVec e(p.order_->size(), 0);
        e[static_cast<std::size_t>(index)] = 1;
        p.terms_[e] = Rational(1);
        return p;
    }

    static Polynomial monomial(VarOrderPtr order, ExpVec e, const Rational& c) {
        Polynomial p(std::move(order));
        if (e.size() != p.order_->size()) throw usage_error("exponent vector length mismatch");
        if (c != 0) p.terms_[std::move(e)] = c;
        return p;
    }

    const VarOrderPtr& order() const { return order_; }
    const std::map<ExpVec, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        const ExpVec& e = terms_.begin()->first;
        return std::all_of(e.begin(), e.end(), [](unsigned x) { return x == 0; });
    }

    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw usage_error("constant_value on non-constant polynomial");
        return terms_.begin()->second;
    }

    // Highest variable index with a positive exponent; -1 for constants.
    int main_variable() const {
        int best = -1;
        for (const auto& [e, c] : terms_)
            for (int v = static_cast<int>(e.size()) - 1; v > best; --v)
                if (e[static_cast<std::size_t>(v)] > 0) best = v;
        return best;
    }

    bool contains_variable(int v) const {
        for (const auto& [e, c] : terms_)
            if (e.at(static_cast<std::size_t>(v)) > 0) return true;
        return false;
    }

    // deg_v of the zero polynomial is -1.
    int degree_in(int v) const {
        int d = -1;
        for (const auto& [e, c] : terms_)
            d = std::max(d, static_cast<int>(e.at(static_cast<std::size_t>(v))));
        return d;
    }

    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int t = 0;
            for (unsigned x : e) t += static_cast<int>(x);
            d = std::max(d, t);
        }
        return d;
    }

    Polynomial operator-() const {
        Polynomial r(order_);
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    Polynomial operator+(const Polynomial& q) const {
        check_order(q);
        Polynomial r = *this;
        for (const auto& [e, c] : q.terms_) {
            auto it = r.terms_.find(e);
            if (it == r.terms_.end()) {
                r.terms_[e] = c;
            } else {
                it->second += c;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
        return r;
    }

    Polynomial operator-(const Polynomial& q) const { return *this + (-q); }

    Polynomial operator*(const Polynomial& q) const {
        check_order(q);
        Polynomial r(order_);
        for (const auto& [e1, c1] : terms_) {
            for (const auto& [e2, c2] : q.terms_) {
                ExpVec e = e1;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += e2[i];
                Rational c = c1 * c2;
                auto it = r.terms_.find(e);
                if (it == r.terms_.end()) {
                    r.terms_[std::move(e)] = c;
                } else {
                    it->second += c;
                    if (it->second == 0) r.terms_.erase(it);
                }
            }
        }
        return r;
    }

    Polynomial operator*(const Rational& c) const {
        Polynomial r(order_);
        if (c == 0) return r;
        for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
        return r;
    }

    Polynomial pow(unsigned n) const {
        Polynomial acc = constant(order_, Rational(1));
        Polynomial b = *this;
        while (n) {
            if (n & 1u) acc = acc * b;
            n >>= 1u;
            if (n) b = b * b;
        }
        return acc;
    }

    bool operator==(const Polynomial& q) const {
        return same_order(order_, q.order_) && terms_ == q.terms_;
    }
    bool operator!=(const Polynomial& q) const { return !(*this == q); }

    // Total order usable as a container key (terms compared lexicographically).
    bool operator<(const Polynomial& q) const {
        auto a = terms_.begin(), b = q.terms_.begin();
        for (; a != terms_.end() && b != q.terms_.end(); ++a, ++b) {
            if (a->first != b->first) return a->first < b->first;
            if (a->second != b->second) return a->second < b->second;
        }
        return a == terms_.end() && b != q.terms_.end();
    }

    // Partial evaluation; unbound variables stay symbolic. Result keeps the
    // ambient order.
    Polynomial eval(const std::map<int, Rational>& bindings) const {
        Polynomial r(order_);
        for (const auto& [e, c] : terms_) {
            Rational coeff = c;
            ExpVec rest = e;
            for (const auto& [v, val] : bindings) {
                std::size_t idx = static_cast<std::size_t>(v);
                if (idx >= rest.size()) throw usage_error("binding out of range");
                if (rest[idx] > 0) {
                    coeff *= rat_pow(val, rest[idx]);
                    rest[idx] = 0;
                }
            }
            if (coeff == 0) continue;
            auto it = r.terms_.find(rest);
            if (it == r.terms_.end()) {
                r.terms_[std::move(rest)] = coeff;
            } else {
                it->second += coeff;
                if (it->second == 0) r.terms_.erase(it);
            }
        }
        return r;
    }

    Rational eval_all(const std::map<int, Rational>& bindings) const {
        Polynomial r = eval(bindings);
        if (!r.is_constant()) throw usage_error("eval_all left unbound variables");
        return r.constant_value();
    }

    Polynomial derivative(int v) const {
        if (v < 0 || static_cast<std::size_t>(v) >= order_->size())
            throw usage_error("derivative variable out of range");
        Polynomial r(order_);
        for (const auto& [e, c] : terms_) {
            unsigned k = e[static_cast<std::size_t>(v)];
            if (k == 0) continue;
            ExpVec d = e;
            d[static_cast<std::size_t>(v)] = k - 1;
            r.terms_[std::move(d)] = c * Rational(static_cast<long>(k));
        }
        return r;
    }

    // Coefficients of v^0 .. v^deg, each free of v. Empty for the zero
    // polynomial.
    std::vector<Polynomial> coefficients_in(int v) const {
        if (v < 0 || static_cast<std::size_t>(v) >= order_->size())
            throw usage_error("coefficient variable out of range");
        int d = degree_in(v);
        std::vector<Polynomial> out(static_cast<std::size_t>(d + 1), Polynomial(order_));
        for (const auto& [e, c] : terms_) {
            unsigned k = e[static_cast<std::size_t>(v)];
            ExpVec rest = e;
            rest[static_cast<std::size_t>(v)] = 0;
            out[k].terms_[std::move(rest)] = c;
        }
        return out;
    }

    static Polynomial from_coefficients(const std::vector<Polynomial>& coeffs, int v,
                                        const VarOrderPtr& order) {
        Polynomial r(order);
        Polynomial x = variable(order, v);
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            r = r + coeffs[k] * x.pow(static_cast<unsigned>(k));
        return r;
    }

    const std::pair<const ExpVec, Rational>& leading_term() const {
        if (terms_.empty()) throw usage_error("leading term of zero polynomial");
        return *terms_.rbegin();
    }

    // Coefficient of v^deg_v, a polynomial in the other variables.
    Polynomial leading_coefficient_in(int v) const {
        int d = degree_in(v);
        if (d < 0) return Polynomial(order_);
        Polynomial r(order_);
        for (const auto& [e, c] : terms_) {
            if (static_cast<int>(e[static_cast<std::size_t>(v)]) != d) continue;
            ExpVec rest = e;
            rest[static_cast<std::size_t>(v)] = 0;
            r.terms_[std::move(rest)] = c;
        }
        return r;
    }

    // Exact quotient; throws if the division is not exact.
    Polynomial exact_divide(const Polynomial& q) const {
        check_order(q);
        if (q.is_zero()) throw usage_error("division by zero polynomial");
        if (q.is_constant()) return *this * (Rational(1) / q.constant_value());
        Polynomial rem = *this;
        Polynomial quot(order_);
        const auto& [qe, qc] = q.leading_term();
        while (!rem.is_zero()) {
            const auto& [re, rc] = rem.leading_term();
            ExpVec diff(re.size());
            for (std::size_t i = 0; i < re.size(); ++i) {
                if (re[i] < qe[i]) throw usage_error("inexact polynomial division");
                diff[i] = re[i] - qe[i];
            }
            Polynomial t = monomial(order_, std::move(diff), rc / qc);
            quot = quot + t;
            rem = rem - t * q;
        }
        return quot;
    }

    // Map onto a new variable order (every used variable must exist there).
    Polynomial reorder(const VarOrderPtr& new_order) const {
        std::vector<int> map(order_->size(), -1);
        for (std::size_t i = 0; i < order_->size(); ++i)
            map[i] = new_order->index_of(order_->name(i));
        Polynomial r(new_order);
        for (const auto& [e, c] : terms_) {
            ExpVec ne(new_order->size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (map[i] < 0)
                    throw usage_error("reorder drops used variable " + order_->name(i));
                ne[static_cast<std::size_t>(map[i])] = e[i];
            }
            r.terms_[std::move(ne)] = c;
        }
        return r;
    }

    // Deterministic text form, reparseable by the formula grammar.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            Rational a = c;
            if (out.empty()) {
                if (a < 0) {
                    out += "-";
                    a = -a;
                }
            } else {
                out += (a < 0) ? " - " : " + ";
                if (a < 0) a = -a;
            }
            std::string mono;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += order_->name(i);
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty()) {
                out += qecad::to_string(a);
            } else if (a == 1) {
                out += mono;
            } else {
                out += qecad::to_string(a) + "*" + mono;
            }
        }
        return out;
    }

  private:
    void check_order(const Polynomial& q) const {
        if (!same_order(order_, q.order_)) throw usage_error("mismatched variable orders");
    }

    VarOrderPtr order_;
    std::map<ExpVec, Rational> terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

enum class PolyOp { Add, Sub, Mul };

inline Polynomial poly_arith(const Polynomial& p, const Polynomial& q, PolyOp op) {
    switch (op) {
        case PolyOp::Add: return p + q;
        case PolyOp::Sub: return p - q;
        case PolyOp::Mul: return p * q;
    }
    throw usage_error("unknown polynomial operation");
}

}  // namespace qecad

#endif  // QECAD_POLYNOMIAL_HPP
