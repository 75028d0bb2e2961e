#pragma once

#include <optional>

#include "cdv/polynomial.hpp"

namespace cdv {

namespace detail {

inline long degree_in(const Polynomial& f, std::size_t v) {
    long d = -1;
    for (const auto& [e, c] : f.terms()) d = std::max(d, static_cast<long>(e[v]));
    return d;
}

inline Polynomial coeff_in(const Polynomial& f, std::size_t v, unsigned k) {
    Polynomial r(f.vars());
    for (const auto& [e, c] : f.terms()) {
        if (e[v] != k) continue;
        ExpVec d = e;
        d[v] = 0;
        r.add_term(d, c);
    }
    return r;
}

inline Polynomial shift_var(const Polynomial& f, std::size_t v, unsigned k) {
    Polynomial r(f.vars());
    for (const auto& [e, c] : f.terms()) {
        ExpVec d = e;
        d[v] += k;
        r.add_term(d, c);
    }
    return r;
}

/// Pseudo-remainder of a by b in the variable v (deg_v b >= 0 required).
inline Polynomial pseudo_rem(Polynomial a, const Polynomial& b, std::size_t v) {
    long db = degree_in(b, v);
    if (db < 0) throw domain_error("pseudo_rem: zero divisor");
    Polynomial lcb = coeff_in(b, v, static_cast<unsigned>(db));
    for (;;) {
        long da = degree_in(a, v);
        if (da < db || a.is_zero()) return a;
        Polynomial lca = coeff_in(a, v, static_cast<unsigned>(da));
        a = lcb * a - shift_var(lca * b, v, static_cast<unsigned>(da - db));
    }
}

}  // namespace detail

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

namespace detail {

/// Content of f with respect to v: gcd of the coefficient polynomials.
inline Polynomial poly_content(const Polynomial& f, std::size_t v) {
    Polynomial g(f.vars());
    for (long k = 0; k <= degree_in(f, v); ++k) {
        Polynomial c = coeff_in(f, v, static_cast<unsigned>(k));
        if (c.is_zero()) continue;
        g = g.is_zero() ? c : poly_gcd(g, c);
    }
    return g;
}

/// Exact division when it is known to be exact (used for primitive parts).
inline Polynomial exact_div(const Polynomial& f, const Polynomial& g, std::size_t v) {
    if (g.is_zero()) throw domain_error("exact_div: zero divisor");
    Polynomial rem = f, quot(f.vars());
    long dg = degree_in(g, v);
    Polynomial lcg = coeff_in(g, v, static_cast<unsigned>(std::max<long>(dg, 0)));
    // divide as univariate in v with polynomial coefficients; coefficients
    // must divide exactly, which holds for content/primitive-part splits
    while (!rem.is_zero()) {
        long dr = degree_in(rem, v);
        if (dr < dg) throw internal_error("exact_div: division not exact");
        Polynomial lcr = coeff_in(rem, v, static_cast<unsigned>(dr));
        // q_k = lcr / lcg must be exact; recurse on another variable
        std::size_t w = 0;
        bool found = false;
        for (std::size_t i = 0; i < f.nvars() && !found; ++i)
            if (degree_in(lcg, i) > 0) { w = i; found = true; }
        Polynomial qk(f.vars());
        if (!found) {
            // constant divisor coefficient
            Rat c = lcg.constant_term();
            qk = Rat(1) / c * lcr;
        } else {
            qk = exact_div(lcr, lcg, w);
        }
        Polynomial term = shift_var(qk, v, static_cast<unsigned>(dr - dg));
        quot += term;
        rem -= term * g;
        if (degree_in(rem, v) >= dr && !rem.is_zero())
            throw internal_error("exact_div: no progress");
    }
    return quot;
}

}  // namespace detail

/// Multivariate gcd over Q by primitive PRS; results are normalized to have
/// leading coefficient 1 in the chosen variable order.  Intended for the
/// small inputs of this library (<= 4 variables, modest degree).
inline Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) return a;
    auto normalize = [](Polynomial p) {
        if (p.is_zero()) return p;
        Rat lead = p.terms().rbegin()->second;
        return Rat(1) / lead * p;
    };
    if (a.is_zero()) return normalize(b);
    if (b.is_zero()) return normalize(a);
    // pick the last variable occurring in either
    std::size_t v = 0;
    bool has_var = false;
    for (std::size_t i = 0; i < a.nvars(); ++i)
        if (detail::degree_in(a, i) > 0 || detail::degree_in(b, i) > 0) {
            v = i;
            has_var = true;
        }
    if (!has_var) return Polynomial::constant(a.vars(), 1);

    Polynomial ca = detail::poly_content(a, v), cb = detail::poly_content(b, v);
    Polynomial pa = detail::exact_div(a, ca, v), pb = detail::exact_div(b, cb, v);
    Polynomial cont = poly_gcd(ca, cb);

    Polynomial f = pa, g = pb;
    if (detail::degree_in(f, v) < detail::degree_in(g, v)) std::swap(f, g);
    while (!g.is_zero()) {
        Polynomial r = detail::pseudo_rem(f, g, v);
        f = g;
        if (r.is_zero()) {
            g = r;
        } else {
            Polynomial cr = detail::poly_content(r, v);
            g = detail::exact_div(r, cr, v);
        }
    }
    return normalize(cont * f);
}

/// True when g divides f exactly.
inline bool poly_divides(const Polynomial& g, const Polynomial& f) {
    if (g.is_zero()) return f.is_zero();
    if (f.is_zero()) return true;
    Polynomial d = poly_gcd(f, g);
    // g | f iff gcd(f, g) has g's multidegree
    for (std::size_t i = 0; i < f.nvars(); ++i)
        if (detail::degree_in(d, i) != detail::degree_in(g, i)) return false;
    return true;
}

/// Exact square root of a rational if it exists.
inline std::optional<Rat> rational_sqrt(const Rat& q) {
    if (q < 0) return std::nullopt;
    Int n = numerator(q), d = denominator(q);
    Int sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
    if (sn * sn != n || sd * sd != d) return std::nullopt;
    return Rat(sn, sd);
}

/// Exact polynomial square root (lex-leading-term descent); nullopt when f
/// is not a perfect square in Q[x].
inline std::optional<Polynomial> polynomial_sqrt(const Polynomial& f) {
    if (f.is_zero()) return f;
    auto lead = *f.terms().rbegin();
    ExpVec half = lead.first;
    for (auto& e : half) {
        if (e % 2) return std::nullopt;
        e /= 2;
    }
    auto c = rational_sqrt(lead.second);
    if (!c) return std::nullopt;
    Polynomial p = Polynomial::monomial(f.vars(), half, *c);
    Polynomial r = f - p * p;
    std::size_t guard = f.terms().size() * f.terms().size() + 64;
    while (!r.is_zero()) {
        if (guard-- == 0) return std::nullopt;
        auto lt = *r.terms().rbegin();
        ExpVec e = lt.first;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < half[i]) return std::nullopt;
            e[i] -= half[i];
        }
        Polynomial t = Polynomial::monomial(f.vars(), e, lt.second / (2 * *c));
        p += t;
        r = f - p * p;
    }
    return p;
}

}  // namespace cdv
