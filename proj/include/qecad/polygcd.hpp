#ifndef QECAD_POLYGCD_HPP
#define QECAD_POLYGCD_HPP

#include <set>
#include <vector>

#include "qecad/polynomial.hpp"

namespace qecad {

// Rational scale r such that p/r has coprime integer coefficients.
inline Rational rational_content(const Polynomial& p) {
    if (p.is_zero()) return Rational(1);
    Integer num_gcd = 0, den_lcm = 1;
    for (const auto& [e, c] : p.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    return make_rational(num_gcd, den_lcm);
}

// Integer-coprime coefficients and positive coefficient on the
// lexicographically last term, so p and -p collapse to one form.
inline Polynomial canonicalize(const Polynomial& p) {
    if (p.is_zero()) return p;
    Polynomial r = p * (Rational(1) / rational_content(p));
    if (r.leading_term().second < 0) r = -r;
    return r;
}

// Pseudo-remainder of p by q in v (result scaled by a power of lc_v(q)).
inline Polynomial pseudo_remainder(const Polynomial& p, const Polynomial& q, int v) {
    int dq = q.degree_in(v);
    if (dq < 0) throw usage_error("pseudo_remainder by zero polynomial");
    Polynomial lead_q = q.leading_coefficient_in(v);
    Polynomial rem = p;
    Polynomial x = Polynomial::variable(p.order(), v);
    while (!rem.is_zero() && rem.degree_in(v) >= dq) {
        int dr = rem.degree_in(v);
        Polynomial lead_r = rem.leading_coefficient_in(v);
        rem = rem * lead_q - lead_r * x.pow(static_cast<unsigned>(dr - dq)) * q;
    }
    return rem;
}

Polynomial content_in(const Polynomial& p, int v);

// Multivariate gcd over Q, canonical form, via primitive pseudo-remainder
// sequences recursing over the variable order.
inline Polynomial gcd_poly(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return canonicalize(b);
    if (b.is_zero()) return canonicalize(a);
    if (a.is_constant() || b.is_constant())
        return Polynomial::constant(a.order(), Rational(1));
    int v = std::max(a.main_variable(), b.main_variable());
    if (a.degree_in(v) == 0) return gcd_poly(a, content_in(b, v));
    if (b.degree_in(v) == 0) return gcd_poly(content_in(a, v), b);

    Polynomial ca = content_in(a, v);
    Polynomial cb = content_in(b, v);
    Polynomial pa = a.exact_divide(ca);
    Polynomial pb = b.exact_divide(cb);
    Polynomial cont = gcd_poly(ca, cb);

    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    while (!pb.is_zero()) {
        Polynomial r = pseudo_remainder(pa, pb, v);
        if (!r.is_zero() && r.degree_in(v) > 0) r = r.exact_divide(content_in(r, v));
        pa = pb;
        pb = r;
    }
    if (pa.degree_in(v) == 0) return cont;  // primitive parts coprime in v
    pa = pa.exact_divide(content_in(pa, v));
    return canonicalize(cont * pa);
}

// gcd of the coefficients of p viewed in v, a polynomial free of v.
inline Polynomial content_in(const Polynomial& p, int v) {
    Polynomial g(p.order());
    for (const Polynomial& c : p.coefficients_in(v)) {
        if (c.is_zero()) continue;
        g = gcd_poly(g, c);
        if (g.is_constant()) break;
    }
    if (g.is_zero()) return Polynomial::constant(p.order(), Rational(1));
    return g;
}

inline Polynomial primitive_part_in(const Polynomial& p, int v) {
    if (p.is_zero()) return p;
    return p.exact_divide(content_in(p, v));
}

// p / gcd(p, dp/dv) with v the highest variable present. Same real zero
// set, simple roots only.
inline Polynomial squarefree_part(const Polynomial& p) {
    if (p.is_constant()) return canonicalize(p);
    int v = p.main_variable();
    Polynomial g = gcd_poly(p, p.derivative(v));
    if (g.is_constant()) return canonicalize(p);
    return canonicalize(p.exact_divide(g));
}

// Primitive square-free representatives, constants dropped, duplicates and
// negations collapsed. Preserves the union of the real zero sets of the
// non-constant inputs only up to content factors; callers that need content
// zeros (the projection does) must add contents themselves.
inline std::vector<Polynomial> normalize_set(const std::vector<Polynomial>& F) {
    std::set<Polynomial> seen;
    for (const Polynomial& f : F) {
        if (f.is_constant()) continue;
        Polynomial g = squarefree_part(f);
        g = primitive_part_in(g, g.main_variable());
        g = canonicalize(g);
        if (g.is_constant()) continue;
        seen.insert(g);
    }
    return std::vector<Polynomial>(seen.begin(), seen.end());
}

}  // namespace qecad

#endif  // QECAD_POLYGCD_HPP
