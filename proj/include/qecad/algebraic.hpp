#ifndef QECAD_ALGEBRAIC_HPP
#define QECAD_ALGEBRAIC_HPP

#include <map>
#include <optional>
#include <vector>

#include "qecad/polygcd.hpp"
#include "qecad/resultant.hpp"
#include "qecad/unipoly.hpp"

namespace qecad {

// Closed rational interval used for outward-rounded evaluation.
struct RatInterval {
    Rational lo, hi;

    static RatInterval point(const Rational& r) { return {r, r}; }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }

    RatInterval operator*(const RatInterval& o) const {
        Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        return {std::min(std::min(a, b), std::min(c, d)),
                std::max(std::max(a, b), std::max(c, d))};
    }

    RatInterval pow(unsigned n) const {
        RatInterval acc = point(Rational(1));
        for (unsigned i = 0; i < n; ++i) acc = acc * *this;
        return acc;
    }

    RatInterval scale(const Rational& c) const {
        if (c >= 0) return {lo * c, hi * c};
        return {hi * c, lo * c};
    }
};

// Real algebraic number: square-free rational-coefficient defining
// polynomial plus an isolating interval [lo, hi]. When lo == hi the number
// is that rational and defining(lo) = 0; otherwise the endpoints are not
// roots and the defining polynomial changes sign across the interval.
// Refinement returns a new value describing the same number.
class AlgebraicNumber {
  public:
    AlgebraicNumber(UniPoly defining, Rational lo, Rational hi)
        : defining_(std::move(defining)), lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_ > hi_) throw usage_error("algebraic number with lo > hi");
        if (lo_ == hi_ && defining_.sign_at(lo_) != 0)
            throw usage_error("point interval must be a root of the defining polynomial");
    }

    static AlgebraicNumber rational(const Rational& r) {
        return AlgebraicNumber(UniPoly::linear_root(r), r, r);
    }

    const UniPoly& defining() const { return defining_; }
    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    bool is_rational() const { return lo_ == hi_; }
    const Rational& value() const {
        if (!is_rational()) throw usage_error("value() of irrational algebraic number");
        return lo_;
    }

    Rational width() const { return hi_ - lo_; }
    RatInterval interval() const { return {lo_, hi_}; }

    // One bisection step (no-op for rationals). Collapses to a rational
    // when the midpoint turns out to be the root.
    AlgebraicNumber refined() const {
        if (is_rational()) return *this;
        Rational mid = (lo_ + hi_) / 2;
        int sm = defining_.sign_at(mid);
        if (sm == 0) return AlgebraicNumber(defining_, mid, mid);
        if (sm == defining_.sign_at(lo_)) return AlgebraicNumber(defining_, mid, hi_);
        return AlgebraicNumber(defining_, lo_, mid);
    }

    AlgebraicNumber refined_below(const Rational& max_width) const {
        AlgebraicNumber a = *this;
        while (a.width() > max_width) a = a.refined();
        return a;
    }

    std::string decimal(unsigned digits) const;

  private:
    UniPoly defining_;
    Rational lo_, hi_;
};

enum class Ordering { Less = -1, Equal = 0, Greater = 1 };

inline Ordering compare(const AlgebraicNumber& a, const Rational& r) {
    if (a.is_rational()) {
        if (a.value() < r) return Ordering::Less;
        if (a.value() > r) return Ordering::Greater;
        return Ordering::Equal;
    }
    AlgebraicNumber x = a;
    while (true) {
        if (x.hi() <= r) return Ordering::Less;   // root lies in the open interval
        if (x.lo() >= r) return Ordering::Greater;
        if (x.defining().sign_at(r) == 0) return Ordering::Equal;  // r is the unique root
        x = x.refined();
        if (x.is_rational()) return compare(x, r);
    }
}

// Exact ordering. Equality is decided via the gcd of the defining
// polynomials on the interval overlap, never by interval width.
inline Ordering compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    if (b.is_rational()) return compare(a, b.value());
    if (a.is_rational()) {
        Ordering o = compare(b, a.value());
        return o == Ordering::Less ? Ordering::Greater
               : o == Ordering::Greater ? Ordering::Less
                                        : Ordering::Equal;
    }
    AlgebraicNumber x = a, y = b;
    bool equality_checked = false;
    while (true) {
        if (x.hi() <= y.lo()) return Ordering::Less;
        if (y.hi() <= x.lo()) return Ordering::Greater;
        if (!equality_checked) {
            equality_checked = true;
            UniPoly g = uni_gcd(x.defining(), y.defining());
            if (g.degree() >= 1) {
                Rational lo = std::max(x.lo(), y.lo());
                Rational hi = std::min(x.hi(), y.hi());
                // Overlap endpoints come from isolating intervals, so they
                // are not roots of either defining polynomial, hence not of g.
                if (lo < hi && sturm_count(g, lo, hi) >= 1) return Ordering::Equal;
                if (lo == hi && g.sign_at(lo) == 0) return Ordering::Equal;
            }
        }
        x = x.refined();
        y = y.refined();
        if (x.is_rational()) return compare(x, y);
        if (y.is_rational()) return compare(x, y);
    }
}

namespace detail {

// Bisection with rational-root deflation; pi square-free, endpoints not
// roots.
inline void isolate_rec(const UniPoly& pi, const std::vector<UniPoly>& seq,
                        const Rational& lo, const Rational& hi,
                        std::vector<AlgebraicNumber>& out) {
    int n = sturm_count(seq, lo, hi);
    if (n == 0) return;
    if (n == 1) {
        out.emplace_back(pi, lo, hi);
        return;
    }
    Rational mid = (lo + hi) / 2;
    if (pi.sign_at(mid) == 0) {
        UniPoly deflated = pi.exact_divide(UniPoly::linear_root(mid));
        auto dseq = sturm_sequence(deflated);
        std::vector<AlgebraicNumber> rest;
        isolate_rec(deflated, dseq, lo, hi, rest);
        for (AlgebraicNumber& r : rest) {
            while (!r.is_rational() && r.lo() < mid && mid < r.hi()) r = r.refined();
            out.push_back(std::move(r));
        }
        out.push_back(AlgebraicNumber::rational(mid));
        std::sort(out.begin(), out.end(), [](const AlgebraicNumber& a, const AlgebraicNumber& b) {
            return compare(a, b) == Ordering::Less;
        });
        return;
    }
    isolate_rec(pi, seq, lo, mid, out);
    isolate_rec(pi, seq, mid, hi, out);
}

}  // namespace detail

// All distinct real roots of the product of square-free parts of F, in
// strictly increasing order, with pairwise disjoint isolating intervals.
inline std::vector<AlgebraicNumber> isolate_roots(const std::vector<UniPoly>& F) {
    UniPoly pi = UniPoly::constant(Rational(1));
    for (const UniPoly& f : F) {
        if (f.degree() < 1) continue;
        pi = pi * uni_squarefree(f);
    }
    if (pi.degree() < 1) return {};
    pi = uni_squarefree(pi);  // roots shared across inputs
    Rational m = root_bound(pi);
    std::vector<AlgebraicNumber> out;
    detail::isolate_rec(pi, sturm_sequence(pi), -m, m, out);
    // Swap the product for the smallest single input factor vanishing in the
    // interval: downstream arithmetic cost grows with the defining degree.
    std::vector<UniPoly> parts;
    for (const UniPoly& f : F)
        if (f.degree() >= 1) parts.push_back(uni_squarefree(f));
    std::sort(parts.begin(), parts.end(),
              [](const UniPoly& a, const UniPoly& b) { return a.degree() < b.degree(); });
    for (AlgebraicNumber& r : out) {
        if (r.is_rational()) continue;
        for (const UniPoly& sf : parts) {
            if (sf.degree() >= r.defining().degree()) break;
            // endpoints may be roots of other factors; move them off first
            AlgebraicNumber t = r;
            bool usable = true;
            for (int i = 0; sf.sign_at(t.lo()) == 0 || sf.sign_at(t.hi()) == 0; ++i) {
                if (i == 8 || t.is_rational()) {
                    usable = false;
                    break;
                }
                t = t.refined();
            }
            if (t.is_rational()) {
                r = t;
                break;
            }
            if (!usable) continue;
            if (sturm_count(sf, t.lo(), t.hi()) == 1) {
                r = AlgebraicNumber(sf, t.lo(), t.hi());
                break;
            }
        }
    }
    for (AlgebraicNumber& r : out) {
        if (r.is_rational()) continue;
        if (r.defining().degree() == 1) {
            const auto& c = r.defining().coeffs();
            r = AlgebraicNumber::rational(-c[0] / c[1]);
        } else {
            r = r.refined();  // collapses when the midpoint is the root
        }
    }
    // Bisection yields intervals that are increasing and touch at most at
    // endpoints; separate them fully.
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        while (!(out[i].hi() < out[i + 1].lo())) {
            if (!out[i].is_rational()) out[i] = out[i].refined();
            if (!out[i + 1].is_rational()) out[i + 1] = out[i + 1].refined();
            if (out[i].is_rational() && out[i + 1].is_rational()) break;
        }
    }
    return out;
}

// Tuple of coordinates, one per CAD level from 1 up to the point's level.
struct SamplePoint {
    std::vector<AlgebraicNumber> coords;

    std::size_t level() const { return coords.size(); }

    SamplePoint extended(AlgebraicNumber next) const {
        SamplePoint p = *this;
        p.coords.push_back(std::move(next));
        return p;
    }

    SamplePoint truncated(std::size_t level) const {
        SamplePoint p;
        p.coords.assign(coords.begin(), coords.begin() + static_cast<long>(level));
        return p;
    }
};

namespace detail {

inline RatInterval box_eval(const Polynomial& p,
                            const std::map<int, RatInterval>& boxes) {
    RatInterval acc = RatInterval::point(Rational(0));
    for (const auto& [e, c] : p.terms()) {
        RatInterval term = RatInterval::point(Rational(1));
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            term = term * boxes.at(static_cast<int>(i)).pow(e[i]);
        }
        acc = acc + term.scale(c);
    }
    return acc;
}

// Remainder of P by d in v; d univariate in v with rational coefficients,
// so values at roots of d are preserved.
inline Polynomial reduce_in(Polynomial P, const Polynomial& d, int v) {
    int dd = d.degree_in(v);
    Rational lc = d.leading_coefficient_in(v).constant_value();
    Polynomial x = Polynomial::variable(P.order(), v);
    while (!P.is_zero() && P.degree_in(v) >= dd) {
        int dp = P.degree_in(v);
        Polynomial lead = P.leading_coefficient_in(v);
        P = P - lead * (Rational(1) / lc) * x.pow(static_cast<unsigned>(dp - dd)) * d;
    }
    return P;
}

// Eliminate one algebraic coordinate from P by a resultant against its
// defining polynomial. Every value P takes at points with v = (that root)
// remains a root of the result in the surviving variables.
inline Polynomial eliminate_coordinate(Polynomial P, const AlgebraicNumber& a, int v) {
    Polynomial d = a.defining().to_polynomial(P.order(), v);
    while (true) {
        if (!P.contains_variable(v)) return P;
        Polynomial reduced = reduce_in(P, d, v);
        if (!reduced.contains_variable(v)) {
            if (reduced.is_zero()) {
                // d divides P in v; split off the common factor. The factor
                // cannot vanish at the coordinate unless P vanishes
                // identically there, which callers exclude.
                Polynomial g = gcd_poly(d, P);
                UniPoly gu = UniPoly::from_polynomial(g, v);
                if (gu.degree() >= 1 && !a.is_rational() &&
                    sturm_count(uni_squarefree(gu), a.lo(), a.hi()) >= 1)
                    throw std::runtime_error(
                        "eliminate_coordinate: polynomial vanishes identically at the point");
                if (gu.degree() >= 1 && a.is_rational() && gu.sign_at(a.value()) == 0)
                    throw std::runtime_error(
                        "eliminate_coordinate: polynomial vanishes identically at the point");
                P = P.exact_divide(g);
                continue;
            }
            return reduced;
        }
        Polynomial r = sylvester_resultant(d, reduced, v);
        if (r.is_zero()) {
            Polynomial g = gcd_poly(d, reduced);
            UniPoly gu = UniPoly::from_polynomial(g, v);
            bool at_root = a.is_rational()
                               ? gu.sign_at(a.value()) == 0
                               : (gu.degree() >= 1 &&
                                  sturm_count(uni_squarefree(gu), a.lo(), a.hi()) >= 1);
            if (at_root)
                throw std::runtime_error(
                    "eliminate_coordinate: degenerate common factor at the point");
            P = reduced.exact_divide(g);
            continue;
        }
        return r;
    }
}

// Eliminate every irrational coordinate, innermost first. Between steps the
// intermediate polynomial is reduced modulo the defining polynomials of the
// coordinates still pending; without this the resultant degrees compound and
// the elimination becomes intractable.
inline Polynomial eliminate_coordinates(
    Polynomial P, const std::vector<std::pair<int, AlgebraicNumber>>& coords) {
    for (auto it = coords.rbegin(); it != coords.rend(); ++it) {
        for (const auto& [v, a] : coords) {
            if (v == it->first || !P.contains_variable(v)) continue;
            Polynomial red = reduce_in(P, a.defining().to_polynomial(P.order(), v), v);
            // a zero remainder means a shared factor; leave that case to
            // eliminate_coordinate's divisor handling
            if (!red.is_zero()) P = red;
        }
        P = eliminate_coordinate(P, it->second, it->first);
    }
    return P;
}

struct AlgebraicCoords {
    std::map<int, Rational> rational;          // var -> value
    std::vector<std::pair<int, AlgebraicNumber>> irrational;  // var -> number
};

inline AlgebraicCoords split_coords(const SamplePoint& pt) {
    AlgebraicCoords c;
    for (std::size_t i = 0; i < pt.coords.size(); ++i) {
        if (pt.coords[i].is_rational())
            c.rational[static_cast<int>(i)] = pt.coords[i].value();
        else
            c.irrational.emplace_back(static_cast<int>(i), pt.coords[i]);
    }
    return c;
}

// Univariate polynomial over Q whose value at p(alpha) is zero. p's
// variables must all be bound by the (already rational-substituted)
// irrational coordinates. The returned polynomial is the minimal polynomial
// of p in the ring Q[v1]/(d1) x ... x Q[vk]/(dk): the first linear
// dependency among its powers, found over the monomial basis with each
// exponent below the degree of the matching defining polynomial.
inline UniPoly annihilator(const Polynomial& p,
                           const std::vector<std::pair<int, AlgebraicNumber>>& coords) {
    std::vector<int> vars;
    std::vector<int> degs;
    std::vector<Polynomial> defs;
    for (const auto& [v, a] : coords) {
        vars.push_back(v);
        degs.push_back(a.defining().degree());
        defs.push_back(a.defining().to_polynomial(p.order(), v));
    }
    auto reduce_full = [&](Polynomial q) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (q.degree_in(vars[i]) >= degs[i]) q = reduce_in(q, defs[i], vars[i]);
        return q;
    };
    std::size_t dim = 1;
    for (int d : degs) dim *= static_cast<std::size_t>(d);
    auto flatten = [&](const Polynomial& q) {
        std::vector<Rational> vec(dim, Rational(0));
        for (const auto& [e, c] : q.terms()) {
            std::size_t idx = 0;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                auto v = static_cast<std::size_t>(vars[i]);
                idx = idx * static_cast<std::size_t>(degs[i]) + (v < e.size() ? e[v] : 0);
            }
            vec[idx] = c;
        }
        return vec;
    };

    Polynomial base = reduce_full(p);
    struct Row {
        std::vector<Rational> vec;   // echelon form of one power
        std::vector<Rational> expr;  // that power in terms of the originals
        std::size_t pivot;
    };
    std::vector<Row> rows;
    Polynomial power = Polynomial::constant(p.order(), Rational(1));
    for (std::size_t k = 0; k <= dim; ++k) {
        std::vector<Rational> w = flatten(power);
        std::vector<Rational> expr(k + 1, Rational(0));
        expr[k] = 1;
        for (const Row& r : rows) {
            if (w[r.pivot] == 0) continue;
            Rational factor = w[r.pivot] / r.vec[r.pivot];
            for (std::size_t j = 0; j < dim; ++j) w[j] -= factor * r.vec[j];
            for (std::size_t j = 0; j < r.expr.size(); ++j) expr[j] -= factor * r.expr[j];
        }
        std::size_t piv = dim;
        for (std::size_t j = 0; j < dim; ++j)
            if (w[j] != 0) {
                piv = j;
                break;
            }
        // a vanishing combination of powers is the minimal polynomial
        if (piv == dim) return UniPoly(std::move(expr));
        rows.push_back({std::move(w), std::move(expr), piv});
        power = reduce_full(power * base);
    }
    throw std::runtime_error("annihilator: no dependency within the ring dimension");
}

}  // namespace detail

// Exact sign of p at an algebraic sample point. Interval refinement decides
// nonzero signs; exact vanishing is certified by isolating the value among
// the roots of a univariate annihilating polynomial.
inline int sign_at(const Polynomial& p, const SamplePoint& pt) {
    if (p.main_variable() >= static_cast<int>(pt.level()))
        throw usage_error("sign_at: sample point does not bind every variable");
    detail::AlgebraicCoords coords = detail::split_coords(pt);
    Polynomial q = p.eval(coords.rational);
    if (q.is_constant()) return sign_of(q.constant_value());

    auto boxes = [&]() {
        std::map<int, RatInterval> b;
        for (const auto& [v, a] : coords.irrational) b[v] = a.interval();
        return b;
    };
    auto refine_all = [&]() {
        for (auto& [v, a] : coords.irrational) a = a.refined().refined();
    };

    for (int round = 0; round < 4; ++round) {
        RatInterval box = detail::box_eval(q, boxes());
        if (box.lo > 0) return 1;
        if (box.hi < 0) return -1;
        refine_all();
    }

    // Possibly an exact zero.
    UniPoly ann = detail::annihilator(q, coords.irrational);
    if (ann.sign_at(Rational(0)) != 0) {
        // Value is a nonzero root of ann; refinement must resolve the sign.
        while (true) {
            RatInterval box = detail::box_eval(q, boxes());
            if (box.lo > 0) return 1;
            if (box.hi < 0) return -1;
            refine_all();
        }
    }
    UniPoly ann_sf = uni_squarefree(ann);
    while (true) {
        RatInterval box = detail::box_eval(q, boxes());
        if (box.lo > 0) return 1;
        if (box.hi < 0) return -1;
        // Widen to non-root endpoints, then count roots of ann in the box.
        Rational nudge = (box.hi - box.lo + 1) / 1024;
        Rational lo = box.lo - nudge, hi = box.hi + nudge;
        while (ann_sf.sign_at(lo) == 0) {
            nudge /= 2;
            lo = box.lo - nudge;
        }
        nudge = (box.hi - box.lo + 1) / 1024;
        while (ann_sf.sign_at(hi) == 0) {
            nudge /= 2;
            hi = box.hi + nudge;
        }
        // The value is a root of ann inside [lo, hi]; if the only root
        // there is 0, the value is exactly 0.
        if (sturm_count(ann_sf, lo, hi) == 1) return 0;
        refine_all();
    }
}

inline std::string AlgebraicNumber::decimal(unsigned digits) const {
    if (is_rational()) return decimal_string(value(), digits);
    Rational eps = make_rational(1, 2);
    for (unsigned i = 0; i < digits; ++i) eps /= 10;
    AlgebraicNumber a = refined_below(eps);
    return decimal_string((a.lo() + a.hi()) / 2, digits);
}

}  // namespace qecad

#endif  // QECAD_ALGEBRAIC_HPP
