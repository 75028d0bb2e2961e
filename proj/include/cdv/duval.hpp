#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cdv/linalg.hpp"
#include "cdv/polynomial.hpp"
#include "cdv/rational.hpp"

namespace cdv {

struct DuValType {
    enum class Family { A, D, E };
    Family family = Family::A;
    long index = 0;

    bool operator==(const DuValType& o) const { return family == o.family && index == o.index; }

    /// Total order extending the deformation order: family A < D < E, then index.
    bool operator<(const DuValType& o) const {
        if (family != o.family) return family < o.family;
        return index < o.index;
    }

    std::string str() const {
        switch (family) {
            case Family::A: return "A" + std::to_string(index);
            case Family::D: return "D" + std::to_string(index);
            case Family::E: return "E" + std::to_string(index);
        }
        return "?";
    }
};

inline DuValType duval_A(long n) { return {DuValType::Family::A, n}; }
inline DuValType duval_D(long n) { return {DuValType::Family::D, n}; }
inline DuValType duval_E(long n) { return {DuValType::Family::E, n}; }

/// Deformation (adjacency) order: a >= b iff germs of type a degenerate to b.
inline bool adjacency_geq(const DuValType& a, const DuValType& b) {
    using F = DuValType::Family;
    if (a.family == b.family) return a.index >= b.index;
    if (a.family == F::D && b.family == F::A) return b.index <= a.index - 1;
    if (a.family == F::E && b.family == F::A) return b.index <= a.index - 1;
    if (a.family == F::E && b.family == F::D) return b.index <= a.index - 1;
    return false;
}

struct DuvalOutcome {
    enum class Kind { Type, NotDuVal, Undecided };
    Kind kind = Kind::Undecided;
    DuValType type;
    long determinacy = 0;  // jets above this degree cannot change the verdict
    std::string diagnostic;

    static DuvalOutcome of(DuValType t, long det) { return {Kind::Type, t, det, ""}; }
    static DuvalOutcome not_duval(std::string why) {
        return {Kind::NotDuVal, {}, 0, std::move(why)};
    }
    static DuvalOutcome undecided(std::string why) {
        return {Kind::Undecided, {}, 0, std::move(why)};
    }
    bool is(DuValType t) const { return kind == Kind::Type && type == t; }
};

namespace detail {

/// Indices of variables actually occurring in f.
inline std::vector<std::size_t> support(const Polynomial& f) {
    std::vector<bool> used(f.nvars(), false);
    for (const auto& [e, c] : f.terms())
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i]) used[i] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < used.size(); ++i)
        if (used[i]) out.push_back(i);
    return out;
}

/// Linear substitution x_i <- x_i + c x_j.
inline Polynomial shear(const Polynomial& f, std::size_t i, std::size_t j, const Rat& c) {
    std::vector<Polynomial> images;
    for (std::size_t k = 0; k < f.nvars(); ++k) images.push_back(Polynomial::variable(f.vars(), k));
    images[i] += c * Polynomial::variable(f.vars(), j);
    return f.substitute(images);
}

/// Writes f = sum_k coeff_k(x without x_i) x_i^k and returns coeff_k.
inline Polynomial coeff_of_power(const Polynomial& f, std::size_t i, unsigned k) {
    Polynomial r(f.vars());
    for (const auto& [e, c] : f.terms()) {
        if (e[i] != k) continue;
        ExpVec d = e;
        d[i] = 0;
        r.add_term(d, c);
    }
    return r;
}

}  // namespace detail

/// Milnor number of a germ supported on at most two variables, computed
/// exactly: the smallest k with m^k contained in the Jacobian ideal is
/// certified by Nakayama's lemma, then the quotient dimension is a rank
/// computation mod m^k.  nullopt when no k <= jet_bound certifies
/// (non-isolated or beyond the bound).
inline std::optional<long> milnor_number_2var(const Polynomial& g, long jet_bound = 24) {
    auto sup = detail::support(g);
    if (sup.size() > 2) throw domain_error("milnor_number_2var: more than two variables used");
    while (sup.size() < 2) {
        // pad with any unused variable index
        for (std::size_t i = 0; i < g.nvars(); ++i)
            if (std::find(sup.begin(), sup.end(), i) == sup.end()) {
                sup.push_back(i);
                break;
            }
        if (g.nvars() < 2) throw domain_error("milnor_number_2var: need an ambient 2-variable ring");
        std::sort(sup.begin(), sup.end());
    }
    const std::size_t y = sup[0], z = sup[1];
    const Polynomial gy = g.derivative(y), gz = g.derivative(z);
    if (gy.is_zero() && gz.is_zero()) return std::nullopt;

    auto mono_index = [](long a, long b) {
        long d = a + b;
        return static_cast<std::size_t>(d * (d + 1) / 2 + b);
    };
    auto count_upto = [](long k) { return static_cast<std::size_t>((k + 1) * (k + 2) / 2); };

    auto rows_upto = [&](long k) {
        // all products x^a y^b * g_partial truncated to degree <= k
        std::vector<std::vector<Rat>> rows;
        const std::size_t dim = count_upto(k);
        for (long a = 0; a <= k; ++a)
            for (long b = 0; a + b <= k; ++b)
                for (const Polynomial* gp : {&gy, &gz} ) {
                    std::vector<Rat> row(dim, Rat(0));
                    bool nonzero = false;
                    for (const auto& [e, c] : gp->terms()) {
                        long ey = e[y] + a, ez = e[z] + b;
                        if (ey + ez > k) continue;
                        row[mono_index(ey, ez)] += c;
                        nonzero = true;
                    }
                    if (nonzero) rows.push_back(std::move(row));
                }
        return rows;
    };

    auto reduces_to_zero = [](const RatMatrix& echelon, std::vector<Rat> v) {
        for (const auto& row : echelon) {
            std::size_t p = 0;
            while (p < row.size() && row[p] == 0) ++p;
            if (p == row.size()) continue;
            if (v[p] != 0) {
                Rat f = v[p] / row[p];
                for (std::size_t j = p; j < v.size(); ++j) v[j] -= f * row[j];
            }
        }
        for (const auto& x : v) if (x != 0) return false;
        return true;
    };

    for (long k = 2; k <= jet_bound; ++k) {
        RatMatrix m = rows_upto(k);
        row_echelon(m);
        bool certified = true;
        for (long b = 0; b <= k && certified; ++b) {
            std::vector<Rat> v(count_upto(k), Rat(0));
            v[mono_index(k - b, b)] = 1;
            if (!reduces_to_zero(m, v)) certified = false;
        }
        if (!certified) continue;
        RatMatrix lower = rows_upto(k - 1);
        long rank = row_echelon(lower);
        return static_cast<long>(count_upto(k - 1)) - rank;
    }
    return std::nullopt;
}

namespace detail {

struct SplitResult {
    Polynomial residual;                 // x_i-free for every split i
    std::vector<std::size_t> split_vars;
    bool truncated = false;
};

/// Splitting-lemma reduction: repeatedly completes the square on a variable
/// with nonzero quadratic self-pairing until the residual quadratic form
/// vanishes.  Works with jets of total degree <= jet_bound throughout.
inline SplitResult split_squares(Polynomial f, long jet_bound) {
    SplitResult out{Polynomial(f.vars()), {}, false};
    f = f.truncate_total(jet_bound);
    for (;;) {
        RatMatrix m = quadratic_form(f);
        const std::size_t n = f.nvars();
        std::size_t pivot = n;
        for (std::size_t i = 0; i < n; ++i)
            if (m[i][i] != 0 &&
                std::find(out.split_vars.begin(), out.split_vars.end(), i) == out.split_vars.end()) {
                pivot = i;
                break;
            }
        if (pivot == n) {
            // no diagonal entry: shear a nonzero off-diagonal pair into one
            bool sheared = false;
            for (std::size_t i = 0; i < n && !sheared; ++i)
                for (std::size_t j = i + 1; j < n && !sheared; ++j)
                    if (m[i][j] != 0) {
                        f = shear(f, i, j, Rat(1)).truncate_total(jet_bound);
                        sheared = true;
                    }
            if (!sheared) break;  // quadratic form exhausted
            continue;
        }
        const Rat c = m[pivot][pivot];
        for (long iter = 0; iter <= jet_bound + 1; ++iter) {
            Polynomial lin = coeff_of_power(f, pivot, 1);
            if (lin.is_zero()) break;
            if (iter == jet_bound + 1) {
                out.truncated = true;
                break;
            }
            std::vector<Polynomial> images;
            for (std::size_t k = 0; k < n; ++k) images.push_back(Polynomial::variable(f.vars(), k));
            images[pivot] -= Rat(1, 2) / c * lin;
            f = f.substitute_trunc(images, jet_bound);
        }
        out.split_vars.push_back(pivot);
        f = coeff_of_power(f, pivot, 0);  // residual: the pivot-free part
    }
    out.residual = f;
    return out;
}

struct LinearForm {
    Rat a, b;  // a*y + b*z
};

struct CubicAnalysis {
    enum class Kind { Zero, ThreeDistinct, SquareTimesLinear, PerfectCube };
    Kind kind;
    LinearForm repeated;  // for SquareTimesLinear / PerfectCube
};

/// Root-multiplicity analysis of a binary cubic p y^3 + q y^2 z + r y z^2 + s z^3
/// over the rationals; only multiplicities matter, never the splitting field.
inline CubicAnalysis analyze_binary_cubic(const Rat& p, const Rat& q, const Rat& r, const Rat& s) {
    using K = CubicAnalysis::Kind;
    if (p == 0 && q == 0 && r == 0 && s == 0) return {K::Zero, {}};
    Rat disc = 18 * p * q * r * s - 4 * q * q * q * s + q * q * r * r - 4 * p * r * r * r -
               27 * p * p * s * s;
    if (disc != 0) return {K::ThreeDistinct, {}};
    if (p == 0) {
        // z divides the cubic: g3 = z (q y^2 + r y z + s z^2)
        if (q == 0) {
            if (r == 0) return {K::PerfectCube, {Rat(0), Rat(1)}};  // s z^3
            return {K::SquareTimesLinear, {Rat(0), Rat(1)}};        // z^2 (r y + s z)
        }
        Rat d2 = r * r - 4 * q * s;
        if (d2 == 0) {
            // q (y + r/(2q) z)^2 * z; the double root is the quadratic's
            return {K::SquareTimesLinear, {Rat(1), r / (2 * q)}};
        }
        throw internal_error("binary cubic: zero discriminant but no repeated factor");
    }
    // p != 0: repeated root of P(t) = p t^3 + q t^2 + r t + s is rational.
    // gcd(P, P') has the repeated roots; compute it by hand for the cubic.
    // P' = 3p t^2 + 2q t + r.  Triple root iff P = p (t - t0)^3.
    Rat t0_triple = -q / (3 * p);
    {
        Rat t = t0_triple;
        Rat val = ((p * t + q) * t + r) * t + s;
        Rat dval = (3 * p * t + 2 * q) * t + r;
        if (val == 0 && dval == 0) {
            Rat d2val = 6 * p * t + 2 * q;
            if (d2val == 0) return {K::PerfectCube, {Rat(1), -t0_triple}};
        }
    }
    // double root: common rational root of P and P', found from the linear
    // remainder of P mod P':  P = (t/3 + q/(9p)) P' + alpha t + beta
    Rat alpha = Rat(2, 3) * r - Rat(2, 9) * q * q / p;
    Rat beta = s - q * r / (9 * p);
    if (alpha == 0) {
        if (beta != 0) throw internal_error("binary cubic: inconsistent gcd step");
        // P' and P share both roots: P = p(t-t0)^2(t-t1) with P' | P handled above
        throw internal_error("binary cubic: unexpected higher gcd");
    }
    Rat t0 = -beta / alpha;
    return {K::SquareTimesLinear, {Rat(1), -t0}};
}

/// Transform sending the line l = a*y + b*z to the first coordinate.
inline Polynomial to_first_coordinate(const Polynomial& g, std::size_t y, std::size_t z,
                                      const LinearForm& l, long jet_bound) {
    // choose complement row (c d) with a*d - b*c = 1
    Rat a = l.a, b = l.b, c, d;
    if (a != 0) {
        c = 0;
        d = 1 / a;
    } else {
        c = -1 / b;
        d = 0;
    }
    // new coords: y' = a y + b z, z' = c y + d z; substitute inverse images
    Rat det = a * d - b * c;
    Rat ia = d / det, ib = -b / det, ic = -c / det, id = a / det;
    std::vector<Polynomial> images;
    for (std::size_t k = 0; k < g.nvars(); ++k) images.push_back(Polynomial::variable(g.vars(), k));
    images[y] = ia * Polynomial::variable(g.vars(), y) + ib * Polynomial::variable(g.vars(), z);
    images[z] = ic * Polynomial::variable(g.vars(), y) + id * Polynomial::variable(g.vars(), z);
    return g.substitute_trunc(images, jet_bound);
}

}  // namespace detail

/// ADE recognition for an isolated surface germ f(x,y,z) = 0 at the origin.
/// Corank 0/1 give the A series, corank 2 splits into D and E by the root
/// pattern of the cubic part, corank 3 is never Du Val.
inline DuvalOutcome classify_duval(const Polynomial& f, long jet_bound = 24) {
    if (f.nvars() != 3) throw domain_error("classify_duval: three variables expected");
    if (f.is_zero()) throw domain_error("classify_duval: zero polynomial");
    if (f.constant_term() != 0) throw domain_error("classify_duval: germ must vanish at the origin");
    for (std::size_t i = 0; i < 3; ++i)
        if (f.linear_coefficient(i) != 0) return DuvalOutcome::of(duval_A(0), 1);  // smooth

    detail::SplitResult split = detail::split_squares(f, jet_bound);
    const long rank = static_cast<long>(split.split_vars.size());
    const Polynomial& g = split.residual;

    if (rank == 3) return DuvalOutcome::of(duval_A(1), 2);

    if (rank == 2) {
        if (g.is_zero())
            return DuvalOutcome::undecided("residual vanishes to the jet bound (A-infinity or beyond)");
        long m = g.order();
        return DuvalOutcome::of(duval_A(m - 1), m);
    }

    if (rank == 1) {
        if (g.is_zero())
            return DuvalOutcome::undecided("corank-2 residual vanishes to the jet bound");
        auto sup = detail::support(g);
        if (sup.size() == 1) {
            // g in one variable: y^2-free and z-only, i.e. f ~ x^2 + z^m,
            // a nonisolated (curve-like) germ unless m is realized in 2 vars
            return DuvalOutcome::not_duval("corank-2 residual depends on one variable only");
        }
        const std::size_t y = sup[0], z = sup[1];
        // cubic part coefficients p y^3 + q y^2 z + r y z^2 + s z^3
        auto coeff3 = [&](unsigned ey, unsigned ez) {
            ExpVec e(g.nvars(), 0);
            e[y] = ey;
            e[z] = ez;
            return g.coefficient(e);
        };
        detail::CubicAnalysis cub =
            detail::analyze_binary_cubic(coeff3(3, 0), coeff3(2, 1), coeff3(1, 2), coeff3(0, 3));
        using CK = detail::CubicAnalysis::Kind;
        if (cub.kind == CK::Zero)
            return DuvalOutcome::not_duval("corank 2 with vanishing cubic part");
        if (cub.kind == CK::ThreeDistinct) return DuvalOutcome::of(duval_D(4), 3);

        auto mu = milnor_number_2var(g, jet_bound);
        if (cub.kind == CK::SquareTimesLinear) {
            if (!mu)
                return DuvalOutcome::undecided("D-series residual order not settled within the jet bound");
            if (*mu < 5) throw internal_error("D-series germ with Milnor number < 5");
            return DuvalOutcome::of(duval_D(*mu), *mu - 1);
        }
        // perfect cube: normalize the cube line to the first coordinate and
        // read the residual orders after a Tschirnhaus shift
        Polynomial h = detail::to_first_coordinate(g, y, z, cub.repeated, jet_bound);
        Rat c3 = detail::coeff_of_power(detail::coeff_of_power(h, y, 3), z, 0).constant_term();
        if (c3 == 0) throw internal_error("cube normalization lost the cubic term");
        for (long iter = 0; iter <= jet_bound + 1; ++iter) {
            Polynomial c2 = detail::coeff_of_power(h, y, 2);
            if (c2.is_zero()) break;
            if (iter == jet_bound + 1) break;
            std::vector<Polynomial> images;
            for (std::size_t k = 0; k < h.nvars(); ++k)
                images.push_back(Polynomial::variable(h.vars(), k));
            images[y] -= Rat(1, 3) / c3 * c2;
            h = h.substitute_trunc(images, jet_bound);
        }
        Polynomial c1 = detail::coeff_of_power(h, y, 1);
        Polynomial c0 = detail::coeff_of_power(h, y, 0);
        long p = c1.is_zero() ? -1 : c1.order();  // -1 encodes "beyond bound"
        long q = c0.is_zero() ? -1 : c0.order();
        auto check_mu = [&](long expect, DuvalOutcome out) {
            if (mu && *mu != expect)
                throw internal_error("E-series reduction disagrees with the Milnor number");
            return out;
        };
        if (q == 4) return check_mu(6, DuvalOutcome::of(duval_E(6), 4));
        if (p == 3) return check_mu(7, DuvalOutcome::of(duval_E(7), 4));
        if (q == 5) return check_mu(8, DuvalOutcome::of(duval_E(8), 5));
        if (p < 0 && q < 0)
            return DuvalOutcome::undecided("cubic-cube residual vanishes to the jet bound");
        return DuvalOutcome::not_duval("corank-2 cube case with residual orders (" +
                                       std::to_string(p) + "," + std::to_string(q) +
                                       ") outside the E range");
    }

    return DuvalOutcome::not_duval("corank 3");
}

/// Compound Du Val classification by pseudo-random hyperplane sections.
struct CdvResult {
    enum class Status { Classified, NotCdv, Undecided };
    Status status = Status::Undecided;
    DuValType type;      // section type of the general hyperplane (when classified)
    bool stable = true;  // samples comparable under the deformation order
    std::string diagnostic;
    std::vector<DuvalOutcome> samples;

    std::string str() const {
        switch (status) {
            case Status::Classified: return "c" + type.str();
            case Status::NotCdv: return "not-cDV";
            case Status::Undecided: return "undecided";
        }
        return "?";
    }
};

inline CdvResult classify_cdv(const Polynomial& f, std::uint64_t seed = 1, int samples = 5,
                              long jet_bound = 24) {
    if (f.nvars() != 4) throw domain_error("classify_cdv: four variables expected");
    if (f.is_zero() || f.constant_term() != 0)
        throw domain_error("classify_cdv: germ must vanish at the origin");
    Lcg rng(seed);
    CdvResult out;
    const std::vector<std::string> section_vars{f.vars()[0], f.vars()[1], f.vars()[2]};
    int drawn = 0;
    for (int s = 0; s < samples; ++s) {
        Polynomial section(section_vars);
        for (int attempt = 0; attempt < 8; ++attempt) {
            ++drawn;
            long n[4];
            for (auto& x : n) x = rng.small_nonzero();
            // hyperplane n.x = 0 solved for x4
            std::vector<Polynomial> images;
            for (std::size_t k = 0; k < 3; ++k)
                images.push_back(Polynomial::variable(section_vars, k));
            Polynomial x4(section_vars);
            for (std::size_t k = 0; k < 3; ++k)
                x4 -= Rat(n[k], n[3]) * Polynomial::variable(section_vars, k);
            images.push_back(x4);
            section = f.substitute(images);
            if (!section.is_zero()) break;
        }
        if (section.is_zero()) {
            out.samples.push_back(DuvalOutcome::undecided("degenerate section"));
            continue;
        }
        out.samples.push_back(classify_duval(section, jet_bound));
    }
    (void)drawn;

    bool any_type = false, any_notduval = false;
    DuValType best;
    for (const auto& r : out.samples) {
        if (r.kind == DuvalOutcome::Kind::Type) {
            if (!any_type || r.type < best) best = r.type;
            any_type = true;
        } else if (r.kind == DuvalOutcome::Kind::NotDuVal) {
            any_notduval = true;
        }
    }
    if (!any_type) {
        if (any_notduval) {
            out.status = CdvResult::Status::NotCdv;
            out.diagnostic = "no sampled section is Du Val";
        } else {
            out.status = CdvResult::Status::Undecided;
            out.diagnostic = "all sections undecided at the jet bound";
        }
        return out;
    }
    out.status = CdvResult::Status::Classified;
    out.type = best;
    for (const auto& r : out.samples)
        if (r.kind == DuvalOutcome::Kind::Type && !adjacency_geq(r.type, best)) out.stable = false;
    if (!out.stable)
        out.diagnostic = "samples are not comparable under the deformation order; result unstable";
    return out;
}

}  // namespace cdv
