#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdv/quotient.hpp"
#include "cdv/rational.hpp"

namespace cdv {

/// Numerical type of a divisorial contraction to a cDV point.
enum class ContractionType { O, I, IIa, IIbV, IIbVV, III, IV };

inline std::string to_string(ContractionType t) {
    switch (t) {
        case ContractionType::O: return "O";
        case ContractionType::I: return "I";
        case ContractionType::IIa: return "IIa";
        case ContractionType::IIbV: return "IIb∨";
        case ContractionType::IIbVV: return "IIb∨∨";
        case ContractionType::III: return "III";
        case ContractionType::IV: return "IV";
    }
    return "?";
}

/// Everything the Riemann-Roch calculus needs: discrepancy a, E^3, E.c2,
/// the basket with the weights b_Q of the third coordinate, and e with
/// ae = 1 mod r (r the lcm of the basket indices).
struct RRContext {
    long a = 1;
    Rat E3;
    Rat Ec2;
    std::vector<std::pair<long, long>> basket_rb;  // (r_Q, b_Q)
    long e = 0;
    long r = 1;
};

/// Orbifold correction term A_i of the Riemann-Roch expansion.
inline Rat A_term(long i, const RRContext& ctx) {
    Rat acc = 0;
    for (const auto& [r, b] : ctx.basket_rb) {
        long ie = to_long(mod_reduce(Int(i) * Int(ctx.e), Int(r)));
        acc -= Rat(ie) * Rat(Int(r) * r - 1, Int(12) * r);
        for (long j = 1; j < ie; ++j) {
            long jb = to_long(mod_reduce(Int(j) * Int(b), Int(r)));
            acc += Rat(Int(jb) * (r - jb), Int(2) * r);
        }
    }
    return acc;
}

/// B_i = sum over the basket of iv(r - iv)/2r with smallest residues.
inline Rat B_term(long i, const Basket& basket) {
    Rat acc = 0;
    for (const auto& [r, v] : basket.entries) {
        long iv = to_long(mod_reduce(Int(i) * Int(v), Int(r)));
        acc += Rat(Int(iv) * (r - iv), Int(2) * r);
    }
    return acc;
}

/// chi(Q_i), the Euler characteristic of the graded piece O(iE)/O((i-1)E).
inline Rat chi_Q(long i, const RRContext& ctx) {
    Rat poly = Rat(2 * (3 * i * i - 3 * i + 1) - 3 * (2 * i - 1) * ctx.a + ctx.a * ctx.a, 12);
    return poly * ctx.E3 + ctx.Ec2 / 12 + A_term(i, ctx) - A_term(i - 1, ctx);
}

/// Builds the context The E.c2 value is never an input: it is solved from
/// chi(Q_0) = 1, and chi(Q_1) = 0 must then hold or the basket/discrepancy
/// data is inconsistent.
inline RRContext solve_c2(long a, const Rat& E3, const Basket& basket) {
    RRContext ctx;
    ctx.a = a;
    ctx.E3 = E3;
    ctx.r = basket.empty() ? 1 : basket.index_lcm();
    if (to_long(gcd(Int(a), Int(ctx.r))) != 1)
        throw domain_error("solve_c2: discrepancy and Gorenstein index are not coprime");
    ctx.e = ctx.r == 1 ? 0 : to_long(mod_inverse(Int(a), Int(ctx.r)));
    for (const auto& [r, v] : basket.entries)
        ctx.basket_rb.emplace_back(r, to_long(mod_reduce(Int(a) * Int(v), Int(r))));
    // chi(Q_0) = (2 + 3a + a^2)/12 E3 + Ec2/12 + A_0 - A_{-1} = 1
    ctx.Ec2 = 0;
    Rat rest = chi_Q(0, ctx);
    ctx.Ec2 = 12 * (Rat(1) - rest);
    if (chi_Q(0, ctx) != 1) throw internal_error("solve_c2: pin chi(Q_0) = 1 failed after solving");
    if (chi_Q(1, ctx) != 0)
        throw domain_error("solve_c2: chi(Q_1) != 0; basket or discrepancy inconsistent");
    return ctx;
}

/// d(-i) for types IIb and III from the closed form 1 + floor(i/r1)
/// (r1 = 1 for type III), valid for 0 <= i < min(r2, a), plus the boundary
/// value d(-a) = 2 + floor(a/r1) when a < r2.  nullopt = unspecified.
inline std::optional<long> d_minus(long i, ContractionType type, long r1, long r2, long a) {
    if (type == ContractionType::III) {
        r2 = std::max(r1, r2);
        r1 = 1;
    } else if (type != ContractionType::IIbV && type != ContractionType::IIbVV) {
        throw domain_error("d_minus: closed form only applies to types IIb and III");
    }
    if (i < 0) throw domain_error("d_minus: i must be nonnegative");
    if (i < std::min(r2, a)) return 1 + i / r1;
    if (i == a && a < r2) return 2 + a / r1;
    return std::nullopt;
}

struct TypeMatch {
    ContractionType type;
    std::string diagnostic;  // set when no row matches
    bool ok = true;
};

/// Matches (a, E^3, J, d(-1)) against the numerical classification rows.
/// IIb is split into one-point / two-point variants by n_nongor_points
/// when supplied (0 = unknown, reported as IIb-vee by convention "one").
inline TypeMatch classify_type(long a, const Rat& E3, const Basket& basket, long d_minus_1,
                               int n_nongor_points = 0) {
    auto fail = [](std::string why) { return TypeMatch{ContractionType::O, std::move(why), false}; };
    long r_lcm = basket.empty() ? 1 : basket.index_lcm();
    if (to_long(gcd(Int(a), Int(r_lcm))) != 1)
        return fail("gcd(a, lcm r_Q) != 1");
    if (!is_integer(E3 * r_lcm) || E3 <= 0)
        return fail("r E^3 is not a positive integer");

    if (a == 1) {
        if (d_minus_1 < 1) return fail("type O requires 1 + d(-1) >= 2");
        return {ContractionType::O, "", true};
    }
    const auto& J = basket.entries;
    // I: J = {(7,3)} or {(3,1),(5,2)}, a = 2, d(-1) = 0
    {
        Basket i1, i2;
        i1.add(7, 3);
        i2.add(3, 1);
        i2.add(5, 2);
        if ((basket == i1 || basket == i2)) {
            if (a == 2 && d_minus_1 == 0) return {ContractionType::I, "", true};
            if (d_minus_1 == 0) return fail("type I basket but a != 2");
        }
    }
    // IIa: J = {(r,2)}, a r E^3 = 4, a = 2 or 4, d(-1) = 1
    if (J.size() == 1 && J[0].second == 2) {
        long r = J[0].first;
        if (d_minus_1 != 1) return fail("IIa basket but d(-1) != 1");
        if ((a == 2 || a == 4) && Rat(a) * r * E3 == 4) return {ContractionType::IIa, "", true};
        return fail("IIa basket but a r E^3 != 4 or a not in {2,4}");
    }
    // IIb: J = {(r1,1),(r2,1)}, a = (r1+r2)/(r1 r2 E^3) >= 2, d(-1) = 1
    if (J.size() == 2 && J[0].second == 1 && J[1].second == 1) {
        long r1 = J[0].first, r2 = J[1].first;
        if (d_minus_1 != 1) return fail("IIb basket but d(-1) != 1");
        if (a >= 2 && Rat(a) * r1 * r2 * E3 == Rat(r1 + r2)) {
            ContractionType t =
                n_nongor_points == 2 ? ContractionType::IIbVV : ContractionType::IIbV;
            return {t, "", true};
        }
        return fail("IIb basket but a r1 r2 E^3 != r1 + r2");
    }
    // III: J = {(r,1)}, a = (1+r)/(r E^3) >= 2, d(-1) = 2
    if (J.size() == 1 && J[0].second == 1) {
        long r = J[0].first;
        if (d_minus_1 != 2) return fail("III basket but d(-1) != 2");
        if (a >= 2 && Rat(a) * r * E3 == Rat(1 + r)) return {ContractionType::III, "", true};
        return fail("III basket but a r E^3 != 1 + r");
    }
    // IV: J empty, a = 2, d(-1) = 3
    if (J.empty()) {
        if (a == 2 && d_minus_1 == 3) return {ContractionType::IV, "", true};
        return fail("empty basket but (a, d(-1)) != (2, 3)");
    }
    return fail("basket matches no row of the numerical classification");
}

}  // namespace cdv
