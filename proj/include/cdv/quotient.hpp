#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cdv/polynomial.hpp"
#include "cdv/rational.hpp"

namespace cdv {

/// Cyclic quotient singularity data 1/r(w_1,...,w_k), weights as residues mod r.
struct QuotientType {
    long r = 1;
    std::vector<long> weights;

    QuotientType() = default;
    QuotientType(long index, std::vector<long> w) : r(index), weights(std::move(w)) {
        if (r <= 0) throw domain_error("QuotientType: index must be positive");
        for (long& x : weights) x = to_long(mod_reduce(Int(x), Int(r)));
    }

    /// Lexicographically least representative over unit multiples and
    /// coordinate permutations; r is small, exhaustive search.
    std::vector<long> canonical_weights() const {
        std::vector<long> best;
        for (long u = 1; u < std::max<long>(r, 2); ++u) {
            if (to_long(gcd(Int(u), Int(r))) != 1) continue;
            std::vector<long> v(weights.size());
            for (std::size_t i = 0; i < weights.size(); ++i)
                v[i] = to_long(mod_reduce(Int(u) * weights[i], Int(r)));
            std::sort(v.begin(), v.end());
            if (best.empty() || v < best) best = v;
        }
        if (best.empty()) best = weights;  // r = 1
        return best;
    }

    bool operator==(const QuotientType& o) const {
        return r == o.r && canonical_weights() == o.canonical_weights();
    }
};

/// Result of terminal normalization: 1/r(1,-1,b) with gcd(b,r)=1.
struct TerminalQuotient {
    long r;
    long b;  // residue mod r, coprime to r
};

/// Normalizes 1/r(w1,w2,w3) to the terminal form 1/r(1,-1,b), searching
/// units and permutations in a fixed order; nullopt when the type is not
/// a terminal quotient (no pair of weights summing to 0 mod r, or a weight
/// sharing a factor with r).
inline std::optional<TerminalQuotient> normalize_quotient(long r, const std::vector<long>& w) {
    if (r <= 0) throw domain_error("normalize_quotient: r must be positive");
    if (w.size() != 3) throw domain_error("normalize_quotient: three weights expected");
    if (r == 1) return std::nullopt;
    std::vector<long> red(3);
    for (int i = 0; i < 3; ++i) {
        red[i] = to_long(mod_reduce(Int(w[i]), Int(r)));
        if (to_long(gcd(Int(red[i]), Int(r))) != 1) return std::nullopt;
    }
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (long u = 1; u < r; ++u) {
        if (to_long(gcd(Int(u), Int(r))) != 1) continue;
        long v[3];
        for (int i = 0; i < 3; ++i) v[i] = to_long(mod_reduce(Int(u) * red[i], Int(r)));
        for (const auto& p : perms) {
            if (v[p[0]] == 1 && v[p[1]] == r - 1) {
                long b = v[p[2]];
                return TerminalQuotient{r, b};
            }
        }
    }
    return std::nullopt;
}

/// v_Q = min residue of e b_Q mod r_Q with ae = 1 mod r_Q.
inline long v_from_b(long r, long b, long a) {
    if (r <= 0) throw domain_error("v_from_b: r must be positive");
    if (to_long(gcd(Int(b), Int(r))) != 1) throw domain_error("v_from_b: gcd(b, r) != 1");
    if (to_long(gcd(Int(a), Int(r))) != 1)
        throw domain_error("v_from_b: discrepancy shares a factor with the index");
    long e = to_long(mod_inverse(Int(a), Int(r)));
    long vbar = to_long(mod_reduce(Int(e) * Int(b), Int(r)));
    return std::min(vbar, r - vbar);
}

/// Multiset of fictitious quotient singularities (r_Q, v_Q), kept sorted.
struct Basket {
    std::vector<std::pair<long, long>> entries;

    void add(long r, long v) {
        if (v < 1 || 2 * v > r) throw domain_error("Basket: need 1 <= v <= r/2");
        if (to_long(gcd(Int(v), Int(r))) != 1) throw domain_error("Basket: gcd(v, r) != 1");
        entries.emplace_back(r, v);
        std::sort(entries.begin(), entries.end());
    }

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }

    long index_lcm() const {
        Int l = 1;
        for (const auto& [r, v] : entries) l = lcm(l, Int(r));
        return to_long(l);
    }

    bool operator==(const Basket& o) const { return entries == o.entries; }

    std::string to_string() const {
        std::string s = "{";
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (i) s += ",";
            s += "(" + std::to_string(entries[i].first) + "," + std::to_string(entries[i].second) + ")";
        }
        return s + "}";
    }
};

/// The recognized local normal forms feeding basket extraction.
struct PointNormalForm {
    enum class Kind {
        PureQuotient,   // 1/r(1,-1,b)
        HypersurfaceA,  // y1 y2 + g(y3, y4) in 1/r(1,-1,b,0), g-order data attached
        Index4,         // y1^2 + y2^2 + g(y3^2, y4) in 1/4(1,3,3,2)
    };
    Kind kind;
    long r = 1;
    long b = 0;        // third-coordinate weight for PureQuotient / HypersurfaceA
    long g_order = 0;  // order of g(0, y4) for the hypersurface forms
    std::string location;  // diagnostic: chart and stratum
    long point_multiplicity = 1;  // conjugate points counted together
};

struct UnrecognizedPoint {
    std::string diagnostic;
};

using BasketOrUnrecognized = std::variant<Basket, UnrecognizedPoint>;

/// Catalog-based basket extraction; a is the discrepancy (needed for v_Q).
/// Anything outside the three recognized normal forms is Unrecognized.
inline BasketOrUnrecognized basket_of_normal_form(const PointNormalForm& p, long a) {
    Basket out;
    switch (p.kind) {
        case PointNormalForm::Kind::PureQuotient:
            for (long m = 0; m < p.point_multiplicity; ++m) out.add(p.r, v_from_b(p.r, p.b, a));
            return out;
        case PointNormalForm::Kind::HypersurfaceA: {
            if (p.g_order < 1)
                return UnrecognizedPoint{"hypersurface point at " + p.location +
                                         ": g(0,y4) vanishes to the jet bound"};
            long v = v_from_b(p.r, p.b, a);
            for (long k = 0; k < p.g_order * p.point_multiplicity; ++k) out.add(p.r, v);
            return out;
        }
        case PointNormalForm::Kind::Index4:
            if (p.r != 4)
                return UnrecognizedPoint{"index-4 form with index " + std::to_string(p.r)};
            if (p.g_order != 3)
                return UnrecognizedPoint{"index-4 form at " + p.location + ": order of g(0,y4) is " +
                                         std::to_string(p.g_order) + ", catalog covers order 3 only"};
            out.add(2, 1);
            out.add(4, 1);
            return out;
    }
    return UnrecognizedPoint{"unknown normal form kind"};
}

}  // namespace cdv
