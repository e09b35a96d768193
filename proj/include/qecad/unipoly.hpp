#ifndef QECAD_UNIPOLY_HPP
#define QECAD_UNIPOLY_HPP

#include <vector>

#include "qecad/polynomial.hpp"

namespace qecad {

// Dense univariate polynomial over Q; coefficient i multiplies x^i.
// The workhorse of Sturm counting and root isolation.
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static UniPoly zero() { return UniPoly(); }
    static UniPoly constant(const Rational& r) { return UniPoly({r}); }
    static UniPoly linear_root(const Rational& r) { return UniPoly({-r, Rational(1)}); }

    // p must involve at most the single variable v.
    static UniPoly from_polynomial(const Polynomial& p, int v) {
        std::vector<Rational> c(static_cast<std::size_t>(std::max(0, p.degree_in(v)) + 1),
                                Rational(0));
        for (const auto& [e, coeff] : p.terms()) {
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] > 0 && static_cast<int>(i) != v)
                    throw usage_error("from_polynomial: polynomial is not univariate in v");
            c[e[static_cast<std::size_t>(v)]] = coeff;
        }
        return UniPoly(std::move(c));
    }

    Polynomial to_polynomial(const VarOrderPtr& order, int v) const {
        Polynomial p(order);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            ExpVec e(order->size(), 0);
            e[static_cast<std::size_t>(v)] = static_cast<unsigned>(i);
            p = p + Polynomial::monomial(order, std::move(e), c_[i]);
        }
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    const Rational& leading() const {
        if (c_.empty()) throw usage_error("leading coefficient of zero polynomial");
        return c_.back();
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    int sign_at(const Rational& x) const { return sign_of(eval(x)); }

    UniPoly derivative() const {
        if (c_.size() <= 1) return UniPoly();
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            d[i - 1] = c_[i] * Rational(static_cast<long>(i));
        return UniPoly(std::move(d));
    }

    UniPoly operator-() const {
        std::vector<Rational> d = c_;
        for (auto& x : d) x = -x;
        return UniPoly(std::move(d));
    }

    UniPoly operator+(const UniPoly& o) const {
        std::vector<Rational> d(std::max(c_.size(), o.c_.size()), Rational(0));
        for (std::size_t i = 0; i < c_.size(); ++i) d[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) d[i] += o.c_[i];
        return UniPoly(std::move(d));
    }

    UniPoly operator-(const UniPoly& o) const { return *this + (-o); }

    UniPoly operator*(const UniPoly& o) const {
        if (is_zero() || o.is_zero()) return UniPoly();
        std::vector<Rational> d(c_.size() + o.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) d[i + j] += c_[i] * o.c_[j];
        return UniPoly(std::move(d));
    }

    UniPoly operator*(const Rational& r) const {
        if (r == 0) return UniPoly();
        std::vector<Rational> d = c_;
        for (auto& x : d) x *= r;
        return UniPoly(std::move(d));
    }

    bool operator==(const UniPoly& o) const { return c_ == o.c_; }

    // Field division with remainder.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
        if (d.is_zero()) throw usage_error("univariate division by zero");
        UniPoly rem = *this;
        std::vector<Rational> q(
            rem.degree() >= d.degree() ? static_cast<std::size_t>(rem.degree() - d.degree() + 1)
                                       : 0,
            Rational(0));
        while (!rem.is_zero() && rem.degree() >= d.degree()) {
            std::size_t shift = static_cast<std::size_t>(rem.degree() - d.degree());
            Rational f = rem.leading() / d.leading();
            q[shift] = f;
            std::vector<Rational> nc = rem.c_;
            for (std::size_t i = 0; i < d.c_.size(); ++i) nc[shift + i] -= f * d.c_[i];
            nc.pop_back();  // leading term cancels exactly
            rem = UniPoly(std::move(nc));
        }
        return {UniPoly(std::move(q)), rem};
    }

    UniPoly exact_divide(const UniPoly& d) const {
        auto [q, r] = divmod(d);
        if (!r.is_zero()) throw usage_error("inexact univariate division");
        return q;
    }

    UniPoly monic() const {
        if (is_zero()) return *this;
        return *this * (Rational(1) / leading());
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

inline UniPoly uni_gcd(UniPoly a, UniPoly b) {
    while (!b.is_zero()) {
        UniPoly r = a.divmod(b).second;
        a = b;
        b = r;
    }
    return a.monic();
}

inline UniPoly uni_squarefree(const UniPoly& p) {
    if (p.degree() <= 1) return p.monic();
    UniPoly g = uni_gcd(p, p.derivative());
    if (g.degree() <= 0) return p.monic();
    return p.exact_divide(g).monic();
}

// Cauchy bound: every real root lies in (-M, M).
inline Rational root_bound(const UniPoly& p) {
    if (p.degree() < 1) throw usage_error("root bound of constant polynomial");
    Rational m(0);
    const auto& c = p.coeffs();
    for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, rat_abs(c[i]));
    return Rational(1) + m / rat_abs(p.leading());
}

// Canonical Sturm sequence p, p', -rem, ...
inline std::vector<UniPoly> sturm_sequence(const UniPoly& p) {
    std::vector<UniPoly> seq;
    seq.push_back(p);
    UniPoly d = p.derivative();
    if (d.is_zero()) return seq;
    seq.push_back(d);
    while (true) {
        const UniPoly& a = seq[seq.size() - 2];
        const UniPoly& b = seq[seq.size() - 1];
        UniPoly r = a.divmod(b).second;
        if (r.is_zero()) break;
        seq.push_back(-r);
    }
    return seq;
}

inline int sign_variations(const std::vector<UniPoly>& seq, const Rational& x) {
    int count = 0, last = 0;
    for (const UniPoly& q : seq) {
        int s = q.sign_at(x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

// Exact count of distinct real roots of square-free p in (lo, hi).
// Endpoints must not be roots; an endpoint root is a distinct error so the
// caller can perturb and retry.
inline int sturm_count(const UniPoly& p, const Rational& lo, const Rational& hi) {
    if (p.degree() < 0) throw usage_error("sturm_count of zero polynomial");
    if (!(lo < hi)) throw usage_error("sturm_count needs lo < hi");
    if (p.sign_at(lo) == 0 || p.sign_at(hi) == 0)
        throw usage_error("sturm_count endpoint is a root");
    auto seq = sturm_sequence(p);
    return sign_variations(seq, lo) - sign_variations(seq, hi);
}

inline int sturm_count(const std::vector<UniPoly>& seq, const Rational& lo,
                       const Rational& hi) {
    return sign_variations(seq, lo) - sign_variations(seq, hi);
}

}  // namespace qecad

#endif  // QECAD_UNIPOLY_HPP
