#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "cdv/polynomial.hpp"
#include "cdv/rational.hpp"

namespace cdv {

/// Semigroup in Z_{>=0} x Z/r generated by pairs (a_i, w_i); generators with
/// infinite first coordinate are omitted by the caller.
struct SemigroupQuery {
    long r;
    std::vector<std::pair<long, long>> gens;  // (order a_i, weight w_i mod r)

    SemigroupQuery(long modulus, std::vector<std::pair<long, long>> g)
        : r(modulus), gens(std::move(g)) {
        if (r <= 0) throw domain_error("SemigroupQuery: modulus must be positive");
        for (auto& [a, w] : gens) {
            if (a < 0) throw domain_error("SemigroupQuery: negative order");
            w = to_long(mod_reduce(Int(w), Int(r)));
        }
    }
};

/// w_Q^C(n): the smallest w >= 0 with (w, n) in the semigroup, as a shortest
/// path over residues (min-plus over the generator steps).  nullopt when the
/// residue n is not reachable.
inline std::optional<long> w_QC(long n, const SemigroupQuery& q) {
    const long r = q.r;
    long target = to_long(mod_reduce(Int(n), Int(r)));
    const long INF = std::numeric_limits<long>::max() / 4;
    std::vector<long> dist(static_cast<std::size_t>(r), INF);
    dist[0] = 0;
    using Node = std::pair<long, long>;  // (cost, residue)
    std::priority_queue<Node, std::vector<Node>, std::greater<>> pq;
    pq.push({0, 0});
    while (!pq.empty()) {
        auto [d, s] = pq.top();
        pq.pop();
        if (d != dist[static_cast<std::size_t>(s)]) continue;
        for (const auto& [a, w] : q.gens) {
            long t = (s + w) % r;
            if (d + a < dist[static_cast<std::size_t>(t)]) {
                dist[static_cast<std::size_t>(t)] = d + a;
                pq.push({d + a, t});
            }
        }
    }
    if (dist[static_cast<std::size_t>(target)] >= INF) return std::nullopt;
    return dist[static_cast<std::size_t>(target)];
}

struct CokernelUndecided {
    std::string diagnostic;
};

using CokernelLength = std::variant<long, CokernelUndecided>;

inline bool cokernel_decided(const CokernelLength& c) { return std::holds_alternative<long>(c); }
inline long cokernel_value(const CokernelLength& c) { return std::get<long>(c); }

/// Cokernel length of the curve-germ map at a quotient point 1/r(1,-1,b) with
/// (x1,x2,x3)|_C = (t^{a1/r}, t^{a2/r}, t^{a3/r}); an entry of nullopt means
/// the coordinate restricts to 0 on C.  The length is the minimum order of
/// the images of dG1 ^ dG2 ^ dg over pairs of ideal generators: binomials of
/// invariant monomials of equal order, plus semi-invariant multiples of the
/// vanishing coordinates.  Enumeration is bounded by `bound` (default 3r)
/// with an explicit undecided diagnostic when the bound is exhausted.
inline CokernelLength cokernel_length_general(long r, long b,
                                              const std::array<std::optional<long>, 3>& a_values,
                                              long bound = -1) {
    if (r <= 0) throw domain_error("cokernel_length_general: r must be positive");
    if (to_long(gcd(Int(b), Int(r))) != 1)
        throw domain_error("cokernel_length_general: gcd(b, r) != 1");
    if (bound < 0) bound = 3 * r;
    const long wts[3] = {1, r - 1, to_long(mod_reduce(Int(b), Int(r)))};
    std::vector<int> finite, infinite;
    for (int i = 0; i < 3; ++i) {
        if (a_values[static_cast<std::size_t>(i)]) {
            if (*a_values[static_cast<std::size_t>(i)] <= 0)
                throw domain_error("cokernel_length_general: orders must be positive");
            finite.push_back(i);
        } else {
            infinite.push_back(i);
        }
    }
    if (finite.size() < 2)
        throw domain_error("cokernel_length_general: at least two coordinates must be nonzero on C");

    std::vector<std::pair<long, long>> gens;
    for (int i : finite) gens.emplace_back(*a_values[static_cast<std::size_t>(i)], wts[i]);
    SemigroupQuery sg(r, gens);
    auto w_minus_b = w_QC(-b, sg);
    if (!w_minus_b)
        return CokernelUndecided{"weight -b is not reachable in the curve semigroup"};

    const std::vector<std::string> vars{"x1", "x2", "x3"};
    auto adeg = [&](const ExpVec& e) {
        long d = 0;
        for (int i : finite) d += static_cast<long>(e[static_cast<std::size_t>(i)]) *
                                  *a_values[static_cast<std::size_t>(i)];
        return d;
    };
    auto wt_of = [&](const ExpVec& e) {
        Int w = 0;
        for (int i = 0; i < 3; ++i) w += Int(e[static_cast<std::size_t>(i)]) * wts[i];
        return to_long(mod_reduce(w, Int(r)));
    };

    // invariant monomial g with g|_C = t, preferring x1 x2
    Polynomial gmono(vars);
    {
        bool found = false;
        std::vector<ExpVec> candidates;
        ExpVec e(3, 0);
        std::function<void(int, long)> rec = [&](int idx, long deg) {
            if (deg > r) return;
            if (idx == static_cast<int>(finite.size())) {
                if (deg == r && wt_of(e) == 0) candidates.push_back(e);
                return;
            }
            int i = finite[static_cast<std::size_t>(idx)];
            long ai = *a_values[static_cast<std::size_t>(i)];
            for (long k = 0; deg + k * ai <= r; ++k) {
                e[static_cast<std::size_t>(i)] = static_cast<unsigned>(k);
                rec(idx + 1, deg + k * ai);
            }
            e[static_cast<std::size_t>(i)] = 0;
        };
        rec(0, 0);
        ExpVec x1x2{1, 1, 0};
        for (const auto& c : candidates)
            if (c == x1x2) {
                gmono = Polynomial::monomial(vars, c, 1);
                found = true;
            }
        if (!found && !candidates.empty()) {
            gmono = Polynomial::monomial(vars, candidates.front(), 1);
            found = true;
        }
        if (!found)
            throw domain_error(
                "cokernel_length_general: no invariant monomial restricts to t on C");
    }

    // generator pool
    struct Gen {
        Polynomial poly;
        long eff;  // minimal order of the restriction-relevant part
    };
    std::vector<Gen> pool;
    {
        // invariant monomials over the finite coordinates, grouped by order
        std::map<long, std::vector<ExpVec>> by_deg;
        ExpVec e(3, 0);
        std::function<void(int, long)> rec = [&](int idx, long deg) {
            if (deg > bound) return;
            if (idx == static_cast<int>(finite.size())) {
                if (deg > 0 && wt_of(e) == 0) by_deg[deg].push_back(e);
                return;
            }
            int i = finite[static_cast<std::size_t>(idx)];
            long ai = *a_values[static_cast<std::size_t>(i)];
            for (long k = 0; deg + k * ai <= bound; ++k) {
                e[static_cast<std::size_t>(i)] = static_cast<unsigned>(k);
                rec(idx + 1, deg + k * ai);
            }
            e[static_cast<std::size_t>(i)] = 0;
        };
        rec(0, 0);
        for (const auto& [deg, monos] : by_deg)
            for (std::size_t i = 0; i < monos.size(); ++i)
                for (std::size_t j = i + 1; j < monos.size(); ++j) {
                    Polynomial p = Polynomial::monomial(vars, monos[i], 1);
                    p -= Polynomial::monomial(vars, monos[j], 1);
                    pool.push_back({p, deg});
                }
        // semi-invariant multiples of coordinates vanishing on C
        for (int k : infinite) {
            long need = to_long(mod_reduce(Int(-wts[k]), Int(r)));
            ExpVec m(3, 0);
            std::function<void(int, long)> rec2 = [&](int idx, long deg) {
                if (deg > bound) return;
                if (idx == static_cast<int>(finite.size())) {
                    if (wt_of(m) == need) {
                        ExpVec full = m;
                        full[static_cast<std::size_t>(k)] += 1;
                        pool.push_back({Polynomial::monomial(vars, full, 1), deg});
                    }
                    return;
                }
                int i = finite[static_cast<std::size_t>(idx)];
                long ai = *a_values[static_cast<std::size_t>(i)];
                for (long kk = 0; deg + kk * ai <= bound; ++kk) {
                    m[static_cast<std::size_t>(i)] = static_cast<unsigned>(kk);
                    rec2(idx + 1, deg + kk * ai);
                }
                m[static_cast<std::size_t>(i)] = 0;
            };
            rec2(0, 0);
        }
    }
    std::sort(pool.begin(), pool.end(), [](const Gen& a, const Gen& b) { return a.eff < b.eff; });

    // restriction to C of a polynomial: t-order, or nullopt when it vanishes
    auto restrict_order = [&](const Polynomial& p) -> std::optional<long> {
        std::map<long, Rat> acc;
        for (const auto& [e2, c] : p.terms()) {
            bool dies = false;
            for (int k : infinite)
                if (e2[static_cast<std::size_t>(k)] > 0) { dies = true; break; }
            if (dies) continue;
            acc[adeg(e2)] += c;
        }
        for (const auto& [d, c] : acc)
            if (c != 0) return d;
        return std::nullopt;
    };

    auto jac_det = [&](const Polynomial& g1, const Polynomial& g2, const Polynomial& g3) {
        std::array<std::array<Polynomial, 3>, 3> m;
        const Polynomial* rows[3] = {&g1, &g2, &g3};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    rows[i]->derivative(static_cast<std::size_t>(j));
        auto& a = m;
        Polynomial det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        return det;
    };

    long sum_a_eff = 0;
    for (int i : finite) sum_a_eff += *a_values[static_cast<std::size_t>(i)];

    std::optional<long> best;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (best && pool[i].eff * 2 + r - sum_a_eff - *w_minus_b >= *best * r) break;
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            if (best && pool[i].eff + pool[j].eff + r - sum_a_eff - *w_minus_b >= *best * r) break;
            Polynomial det = jac_det(pool[i].poly, pool[j].poly, gmono);
            auto ord = restrict_order(det);
            if (!ord) continue;
            Int num = Int(*ord) - *w_minus_b;
            if (mod_reduce(num, Int(r)) != 0)
                throw domain_error("cokernel_length_general: order violates the weight congruence");
            long len = to_long(num / r);
            if (len < 0) throw internal_error("cokernel_length_general: negative length");
            if (!best || len < *best) best = len;
        }
    }
    if (!best)
        return CokernelUndecided{"no pair of generators below the degree bound " +
                                 std::to_string(bound) + " gives a finite order"};
    return *best;
}

/// Quotient-case cokernel length; the closed form min{c, r-c} is the test
/// oracle, the implementation routes through the general enumeration.
inline CokernelLength cokernel_length_quotient(long r, long b, long c, long bound = -1) {
    if (c < 1 || c > r - 1) throw domain_error("cokernel_length_quotient: need 1 <= c <= r-1");
    return cokernel_length_general(r, b, {c, r - c, std::nullopt}, bound);
}

}  // namespace cdv
