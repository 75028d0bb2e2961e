#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdv/duval.hpp"
#include "cdv/linalg.hpp"
#include "cdv/quotient.hpp"
#include "cdv/rational.hpp"

namespace cdv {

using Cycle = std::vector<Rat>;

/// ADE exceptional configuration: curves F_1..F_n with the Cartan pairing
/// (F_i.F_i = -2, F_i.F_j in {0,1}), the fundamental-cycle coefficients of
/// the standard diagrams, and bullet marks for the strict transform of a
/// general hyperplane section.
struct DualGraph {
    DuValType type;
    int n = 0;
    std::vector<std::vector<int>> adj;
    std::vector<long> fund;
    std::vector<int> bullets;

    long pairing(int i, int j) const {
        if (i == j) return -2;
        for (int k : adj[static_cast<std::size_t>(i)])
            if (k == j) return 1;
        return 0;
    }

    Rat pair_cycles(const Cycle& a, const Cycle& b) const {
        Rat acc = 0;
        for (int i = 0; i < n; ++i) {
            if (a[static_cast<std::size_t>(i)] == 0) continue;
            acc += a[static_cast<std::size_t>(i)] * Rat(-2) * b[static_cast<std::size_t>(i)];
            for (int j : adj[static_cast<std::size_t>(i)])
                acc += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
        }
        return acc;
    }
};

/// The five standard diagrams with their attached fundamental-cycle numbers
/// and bullet positions.
inline DualGraph ade_graph(const DuValType& t) {
    DualGraph g;
    g.type = t;
    using F = DuValType::Family;
    auto link = [&](int i, int j) {
        g.adj[static_cast<std::size_t>(i)].push_back(j);
        g.adj[static_cast<std::size_t>(j)].push_back(i);
    };
    if (t.family == F::A) {
        if (t.index < 1) throw domain_error("ade_graph: A_n needs n >= 1");
        g.n = static_cast<int>(t.index);
        g.adj.assign(static_cast<std::size_t>(g.n), {});
        for (int i = 0; i + 1 < g.n; ++i) link(i, i + 1);
        g.fund.assign(static_cast<std::size_t>(g.n), 1);
        g.bullets = {0, g.n - 1};
        if (g.n == 1) g.bullets = {0, 0};
    } else if (t.family == F::D) {
        if (t.index < 4) throw domain_error("ade_graph: D_n needs n >= 4");
        g.n = static_cast<int>(t.index);
        g.adj.assign(static_cast<std::size_t>(g.n), {});
        for (int i = 0; i + 1 < g.n - 2; ++i) link(i, i + 1);
        link(g.n - 3, g.n - 2);
        link(g.n - 3, g.n - 1);
        g.fund.assign(static_cast<std::size_t>(g.n), 2);
        g.fund[0] = 1;
        g.fund[static_cast<std::size_t>(g.n - 2)] = 1;
        g.fund[static_cast<std::size_t>(g.n - 1)] = 1;
        g.bullets = {1};
    } else {
        switch (t.index) {
            case 6:
                g.n = 6;
                g.adj.assign(6, {});
                link(1, 2); link(2, 3); link(3, 4); link(4, 5); link(0, 3);
                g.fund = {2, 1, 2, 3, 2, 1};
                g.bullets = {0};
                break;
            case 7:
                g.n = 7;
                g.adj.assign(7, {});
                for (int i = 0; i < 5; ++i) link(i, i + 1);
                link(6, 2);
                g.fund = {2, 3, 4, 3, 2, 1, 2};
                g.bullets = {0};
                break;
            case 8:
                g.n = 8;
                g.adj.assign(8, {});
                for (int i = 0; i < 6; ++i) link(i, i + 1);
                link(7, 4);
                g.fund = {2, 3, 4, 5, 6, 4, 2, 3};
                g.bullets = {0};
                break;
            default:
                throw domain_error("ade_graph: E index must be 6, 7 or 8");
        }
    }
    return g;
}

/// Laufer's algorithm: start from the reduced cycle and bump any curve with
/// positive pairing until Z.F_i <= 0 everywhere.
inline std::vector<long> fundamental_cycle(const DualGraph& g) {
    std::vector<long> z(static_cast<std::size_t>(g.n), 1);
    auto pair_with = [&](int i) {
        long acc = -2 * z[static_cast<std::size_t>(i)];
        for (int j : g.adj[static_cast<std::size_t>(i)]) acc += z[static_cast<std::size_t>(j)];
        return acc;
    };
    for (long guard = 0; guard < 16L * g.n * g.n + 64; ++guard) {
        int bump = -1;
        for (int i = 0; i < g.n; ++i)
            if (pair_with(i) > 0) { bump = i; break; }
        if (bump < 0) return z;
        ++z[static_cast<std::size_t>(bump)];
    }
    throw domain_error("fundamental_cycle: iteration did not terminate (not negative definite?)");
}

/// A partial resolution: the minimal-resolution graph with the subset K of
/// curves contracted on the way down to S.
struct PartialResolution {
    DualGraph graph;
    std::vector<int> contracted;

    bool is_contracted(int i) const {
        return std::find(contracted.begin(), contracted.end(), i) != contracted.end();
    }
};

/// Unique extension of c across the contracted curves that pairs to zero
/// with each of them (the numerically trivial rational pullback).
inline Cycle mumford_pullback(const PartialResolution& p, const Cycle& c) {
    const auto& g = p.graph;
    for (int k : p.contracted)
        if (c[static_cast<std::size_t>(k)] != 0)
            throw domain_error("mumford_pullback: cycle meets the contracted set");
    const std::size_t m = p.contracted.size();
    Cycle out = c;
    if (m == 0) return out;
    RatMatrix a(m, std::vector<Rat>(m, Rat(0)));
    std::vector<Rat> rhs(m, Rat(0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            a[i][j] = Rat(g.pairing(p.contracted[i], p.contracted[j]));
        Rat load = 0;
        for (int x = 0; x < g.n; ++x)
            if (c[static_cast<std::size_t>(x)] != 0)
                load += c[static_cast<std::size_t>(x)] * Rat(g.pairing(x, p.contracted[i]));
        rhs[i] = -load;
    }
    std::vector<Rat> gamma = solve_linear(a, rhs);
    for (std::size_t i = 0; i < m; ++i) out[static_cast<std::size_t>(p.contracted[i])] = gamma[i];
    return out;
}

/// Intersection number of cycles supported off K, computed on S.
inline Rat intersect_on_S(const PartialResolution& p, const Cycle& c1, const Cycle& c2) {
    for (int k : p.contracted)
        if (c2[static_cast<std::size_t>(k)] != 0)
            throw domain_error("intersect_on_S: second cycle meets the contracted set");
    return p.graph.pair_cycles(mumford_pullback(p, c1), c2);
}

namespace detail {

/// Shape recognition of an induced subgraph component: A/D/E type or nullopt.
inline std::optional<DuValType> component_type(const DualGraph& g, const std::vector<int>& comp) {
    std::map<int, int> deg;
    for (int v : comp) {
        int d = 0;
        for (int w : g.adj[static_cast<std::size_t>(v)])
            if (std::find(comp.begin(), comp.end(), w) != comp.end()) ++d;
        deg[v] = d;
        if (d > 3) return std::nullopt;
    }
    std::vector<int> branch;
    for (auto& [v, d] : deg)
        if (d == 3) branch.push_back(v);
    if (branch.size() > 1) return std::nullopt;
    if (branch.empty()) return duval_A(static_cast<long>(comp.size()));
    // legs from the unique branch vertex
    std::vector<int> legs;
    int b = branch[0];
    for (int w : g.adj[static_cast<std::size_t>(b)]) {
        if (std::find(comp.begin(), comp.end(), w) == comp.end()) continue;
        int len = 0, prev = b, cur = w;
        for (;;) {
            ++len;
            int next = -1;
            for (int x : g.adj[static_cast<std::size_t>(cur)]) {
                if (x == prev) continue;
                if (std::find(comp.begin(), comp.end(), x) == comp.end()) continue;
                if (next != -1) return std::nullopt;  // second branch on a leg
                next = x;
            }
            if (next == -1) break;
            prev = cur;
            cur = next;
        }
        legs.push_back(len);
    }
    std::sort(legs.begin(), legs.end());
    if (legs.size() != 3) return std::nullopt;
    if (legs[0] == 1 && legs[1] == 1) return duval_D(static_cast<long>(comp.size()));
    if (legs[0] == 1 && legs[1] == 2 && legs[2] >= 2 && legs[2] <= 4)
        return duval_E(static_cast<long>(comp.size()));
    return std::nullopt;
}

inline std::vector<std::vector<int>> complement_components(const DualGraph& g,
                                                           const std::vector<int>& kept) {
    std::vector<bool> removed(static_cast<std::size_t>(g.n), false);
    for (int k : kept) removed[static_cast<std::size_t>(k)] = true;
    std::vector<bool> seen(static_cast<std::size_t>(g.n), false);
    std::vector<std::vector<int>> comps;
    for (int s = 0; s < g.n; ++s) {
        if (removed[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
        std::vector<int> comp, stack{s};
        seen[static_cast<std::size_t>(s)] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int w : g.adj[static_cast<std::size_t>(v)])
                if (!removed[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = true;
                    stack.push_back(w);
                }
        }
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    return comps;
}

/// Graph automorphisms as index permutations (identity included).
inline std::vector<std::vector<int>> graph_automorphisms(const DualGraph& g) {
    std::vector<std::vector<int>> autos;
    std::vector<int> id(static_cast<std::size_t>(g.n));
    for (int i = 0; i < g.n; ++i) id[static_cast<std::size_t>(i)] = i;
    autos.push_back(id);
    using F = DuValType::Family;
    if (g.type.family == F::A && g.n > 1) {
        std::vector<int> flip(static_cast<std::size_t>(g.n));
        for (int i = 0; i < g.n; ++i) flip[static_cast<std::size_t>(i)] = g.n - 1 - i;
        autos.push_back(flip);
    } else if (g.type.family == F::D) {
        std::vector<int> swap_forks = id;
        std::swap(swap_forks[static_cast<std::size_t>(g.n - 2)],
                  swap_forks[static_cast<std::size_t>(g.n - 1)]);
        autos.push_back(swap_forks);
        if (g.n == 4) {
            // all permutations of the three leaves 0, 2, 3
            const int leaves[3] = {0, 2, 3};
            int perm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            autos.clear();
            for (auto& p : perm3) {
                std::vector<int> a = id;
                for (int i = 0; i < 3; ++i) a[static_cast<std::size_t>(leaves[i])] = leaves[p[i]];
                autos.push_back(a);
            }
        }
    } else if (g.type.family == F::E && g.type.index == 6) {
        std::vector<int> flip = {0, 5, 4, 3, 2, 1};
        autos.push_back(flip);
    }
    return autos;
}

inline std::vector<int> canonical_kept(const DualGraph& g, std::vector<int> kept) {
    std::sort(kept.begin(), kept.end());
    std::vector<int> best = kept;
    for (const auto& a : graph_automorphisms(g)) {
        std::vector<int> img;
        for (int k : kept) img.push_back(a[static_cast<std::size_t>(k)]);
        std::sort(img.begin(), img.end());
        if (img < best) best = img;
    }
    return best;
}

inline std::string cycle_string(const DualGraph& g, const std::map<int, long>& mult) {
    std::string s;
    for (const auto& [i, m] : mult) {
        if (!s.empty()) s += "+";
        if (m != 1) s += std::to_string(m);
        s += "F" + std::to_string(i + 1);
    }
    return s.empty() ? "0" : s;
}

}  // namespace detail

/// One enumerated partial-resolution candidate.
struct CandidateRow {
    std::string surface;            // S_X graph, e.g. "D6", "E8"
    std::string z;                  // strict transform of the fundamental cycle
    std::string exceptional;        // bE|_S as a cycle
    std::map<int, long> kept;       // curve index -> multiplicity in E|_S
    Rat value;                      // (H|_S . bE|_S)
    bool survives = false;          // value matches b^2 a E^3
    bool excluded = false;          // killed by the component-proportionality test
    bool irreducible = true;        // one kept curve
    std::string note;
};

struct CandidateTable {
    std::vector<CandidateRow> rows;
    Rat target;                          // the filter value
    std::vector<std::string> survivors;  // surface types surviving all filters
};

/// Candidate enumeration for contractions of type I: E|_S is reduced with one
/// or two components through the fictitious points for J = {(7,3)}, and an
/// irreducible but possibly double component for J = {(3,1),(5,2)}.  The
/// table value is (H|_S . 2E|_S) = -4 (E|_S . E|_S)_S, filtered against
/// 8 E^3, with unequal per-component intersection numbers excluding a
/// two-component survivor.
inline CandidateTable enumerate_typeI_candidates(const Basket& J, int n_bound = 16) {
    Basket j7, j35;
    j7.add(7, 3);
    j35.add(3, 1);
    j35.add(5, 2);
    bool seven = (J == j7);
    if (!seven && !(J == j35))
        throw domain_error("enumerate_typeI_candidates: J must be {(7,3)} or {(3,1),(5,2)}");
    const Rat E3 = seven ? Rat(1, 7) : Rat(1, 15);
    CandidateTable table;
    table.target = 8 * E3;

    std::vector<DualGraph> graphs;
    for (int n = 4; n <= n_bound; ++n) graphs.push_back(ade_graph(duval_D(n)));
    graphs.push_back(ade_graph(duval_E(6)));
    graphs.push_back(ade_graph(duval_E(7)));
    graphs.push_back(ade_graph(duval_E(8)));

    for (const auto& g : graphs) {
        std::set<std::vector<int>> seen;
        std::vector<std::vector<std::pair<int, long>>> configs;  // (curve, multiplicity)
        if (seven) {
            for (int i = 0; i < g.n; ++i) {
                if (g.fund[static_cast<std::size_t>(i)] < 2) continue;
                configs.push_back({{i, 1}});
                for (int j = i + 1; j < g.n; ++j) {
                    if (g.fund[static_cast<std::size_t>(j)] < 2) continue;
                    if (g.pairing(i, j) != 0) continue;  // components meet only at the star
                    auto comps = detail::complement_components(g, {i, j});
                    bool common = false;
                    for (const auto& comp : comps) {
                        bool ti = false, tj = false;
                        for (int v : comp) {
                            if (g.pairing(v, i) == 1) ti = true;
                            if (g.pairing(v, j) == 1) tj = true;
                        }
                        if (ti && tj) common = true;
                    }
                    if (common) configs.push_back({{i, 1}, {j, 1}});
                }
            }
        } else {
            for (int i = 0; i < g.n; ++i)
                for (long k = 1; k <= 2; ++k)
                    if (2 * k <= g.fund[static_cast<std::size_t>(i)]) configs.push_back({{i, k}});
        }
        for (const auto& cfg : configs) {
            std::vector<int> kept_idx;
            for (auto& [i, m] : cfg) kept_idx.push_back(i);
            auto canon = detail::canonical_kept(g, kept_idx);
            if (!seen.insert(canon).second) continue;

            PartialResolution pr{g, {}};
            for (int v = 0; v < g.n; ++v)
                if (std::find(kept_idx.begin(), kept_idx.end(), v) == kept_idx.end())
                    pr.contracted.push_back(v);
            Cycle es(static_cast<std::size_t>(g.n), Rat(0));
            std::map<int, long> kept_mult, two_es, zmap;
            for (auto& [i, m] : cfg) {
                es[static_cast<std::size_t>(i)] = m;
                kept_mult[i] = m;
                two_es[i] = 2 * m;
                zmap[i] = g.fund[static_cast<std::size_t>(i)];
            }
            Rat self = intersect_on_S(pr, es, es);
            CandidateRow row;
            row.surface = g.type.str();
            row.kept = kept_mult;
            row.z = detail::cycle_string(g, zmap);
            row.exceptional = detail::cycle_string(g, two_es);
            row.value = -4 * self;
            row.irreducible = kept_mult.size() == 1;
            row.survives = (row.value == table.target);
            if (row.survives && kept_mult.size() == 2) {
                // component test: both components of S cap E meet E equally
                std::vector<Rat> comp_vals;
                for (auto& [i, m] : kept_mult) {
                    Cycle fi(static_cast<std::size_t>(g.n), Rat(0));
                    fi[static_cast<std::size_t>(i)] = 1;
                    comp_vals.push_back(intersect_on_S(pr, es, fi));
                }
                if (comp_vals[0] != comp_vals[1]) {
                    row.excluded = true;
                    row.note = "(E.F) differs across components: " + to_string(comp_vals[0]) +
                               " vs " + to_string(comp_vals[1]);
                }
            }
            table.rows.push_back(std::move(row));
        }
    }
    std::set<std::string> fams;
    for (const auto& r : table.rows)
        if (r.survives && !r.excluded) fams.insert(r.surface);
    table.survivors.assign(fams.begin(), fams.end());
    return table;
}

/// Candidate enumeration for types IIa, IIb and III: kept curves carry
/// fundamental-cycle coefficient 1 (so Z = E|_S is reduced), the contracted
/// clusters must be the Du Val sections of the non-Gorenstein points, the
/// hyperplane bullets stay off the kept curves (one bullet on a kept curve
/// exactly for type III), and the filter is (H|_S . E|_S) = a E^3.
inline CandidateTable enumerate_typeII_III_candidates(ContractionType type, const Basket& J, long a,
                                                      const Rat& E3, int n_bound = 16) {
    std::vector<std::vector<DuValType>> cluster_options;
    std::size_t kept_max = 2;
    bool host_a = false;
    int kept_bullets = 0;
    switch (type) {
        case ContractionType::IIa: {
            if (J.size() != 1 || J.entries[0].second != 2)
                throw domain_error("IIa needs J = {(r,2)}");
            long r = J.entries[0].first;
            cluster_options.push_back({duval_A(r - 1)});
            kept_max = 4;
            break;
        }
        case ContractionType::IIbV: {
            if (J.size() != 2 || J.entries[0].second != 1 || J.entries[1].second != 1)
                throw domain_error("IIb-vee needs J = {(r1,1),(r2,1)}");
            long r1 = J.entries[0].first, r2 = J.entries[1].first;
            if (r1 == r2) {
                cluster_options.push_back({duval_A(2 * r1 - 1)});
                if (r1 == 3) cluster_options.push_back({duval_E(6)});
                kept_max = 2;
            } else if (r1 == 2 && r2 == 4) {
                cluster_options.push_back({duval_D(5)});
                kept_max = 3;
            } else {
                throw domain_error("IIb-vee supports J = {(r,1),(r,1)} or {(2,1),(4,1)}");
            }
            break;
        }
        case ContractionType::IIbVV: {
            if (J.size() != 2 || J.entries[0].second != 1 || J.entries[1].second != 1)
                throw domain_error("IIb-vee-vee needs J = {(r1,1),(r2,1)}");
            long r1 = J.entries[0].first, r2 = J.entries[1].first;
            if (r1 < 2) throw domain_error("IIb-vee-vee needs r1, r2 >= 2");
            cluster_options.push_back({duval_A(r1 - 1), duval_A(r2 - 1)});
            host_a = true;
            kept_max = 2;
            break;
        }
        case ContractionType::III: {
            if (J.size() != 1 || J.entries[0].second != 1)
                throw domain_error("III needs J = {(r,1)}");
            long r = J.entries[0].first;
            cluster_options.push_back({duval_A(r - 1)});
            host_a = true;
            kept_bullets = 1;
            kept_max = 2;
            break;
        }
        default:
            throw domain_error("enumerate_typeII_III_candidates: type must be IIa, IIb or III");
    }
    for (auto& opt : cluster_options) std::sort(opt.begin(), opt.end());

    long cluster_span = 0;
    for (const auto& opt : cluster_options)
        for (const auto& t : opt) cluster_span = std::max(cluster_span, t.index);
    n_bound = std::max<int>(n_bound, static_cast<int>(2 * cluster_span + kept_max) + 2);

    CandidateTable table;
    table.target = Rat(a) * E3;

    std::vector<DualGraph> graphs;
    if (host_a) {
        for (int n = 1; n <= n_bound; ++n) graphs.push_back(ade_graph(duval_A(n)));
    } else {
        for (int n = 4; n <= n_bound; ++n) graphs.push_back(ade_graph(duval_D(n)));
        graphs.push_back(ade_graph(duval_E(6)));
        graphs.push_back(ade_graph(duval_E(7)));
        graphs.push_back(ade_graph(duval_E(8)));
    }

    for (const auto& g : graphs) {
        std::vector<int> unit_curves;
        for (int i = 0; i < g.n; ++i)
            if (g.fund[static_cast<std::size_t>(i)] == 1) unit_curves.push_back(i);
        std::set<std::vector<int>> seen;
        // all nonempty subsets of the coefficient-one curves up to kept_max
        std::vector<std::vector<int>> subsets{{}};
        for (int c : unit_curves) {
            std::size_t sz = subsets.size();
            for (std::size_t s = 0; s < sz; ++s) {
                if (subsets[s].size() >= kept_max) continue;
                auto withc = subsets[s];
                withc.push_back(c);
                subsets.push_back(std::move(withc));
            }
        }
        for (const auto& kept : subsets) {
            if (kept.empty()) continue;
            int bullets_on_kept = 0;
            for (int bcur : g.bullets)
                if (std::find(kept.begin(), kept.end(), bcur) != kept.end()) ++bullets_on_kept;
            if (bullets_on_kept != kept_bullets) continue;
            auto comps = detail::complement_components(g, kept);
            std::vector<DuValType> shape;
            bool ok = true;
            for (const auto& comp : comps) {
                auto t = detail::component_type(g, comp);
                if (!t) { ok = false; break; }
                shape.push_back(*t);
            }
            if (!ok) continue;
            std::sort(shape.begin(), shape.end());
            bool matches = false;
            for (const auto& opt : cluster_options)
                if (shape == opt) matches = true;
            if (!matches) continue;
            auto canon = detail::canonical_kept(g, kept);
            if (!seen.insert(canon).second) continue;

            PartialResolution pr{g, {}};
            for (int v = 0; v < g.n; ++v)
                if (std::find(kept.begin(), kept.end(), v) == kept.end())
                    pr.contracted.push_back(v);
            Cycle es(static_cast<std::size_t>(g.n), Rat(0));
            std::map<int, long> mult;
            for (int i : kept) {
                es[static_cast<std::size_t>(i)] = 1;
                mult[i] = 1;
            }
            CandidateRow row;
            row.surface = g.type.str();
            row.kept = mult;
            row.z = detail::cycle_string(g, mult);
            row.exceptional = row.z;
            row.value = -intersect_on_S(pr, es, es);
            row.survives = (row.value == table.target);
            row.irreducible = kept.size() == 1;
            table.rows.push_back(std::move(row));
        }
    }
    std::set<std::string> fams;
    for (const auto& r : table.rows)
        if (r.survives) fams.insert(r.surface);
    table.survivors.assign(fams.begin(), fams.end());
    return table;
}

}  // namespace cdv
