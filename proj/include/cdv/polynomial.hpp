#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdv/linalg.hpp"
#include "cdv/rational.hpp"

namespace cdv {

using ExpVec = std::vector<unsigned>;

/// Positive weights, one per variable.  Normalization (dividing out the
/// common gcd) is an explicit operation, never implicit.
struct WeightVector {
    std::vector<long> w;

    WeightVector() = default;
    WeightVector(std::initializer_list<long> init) : w(init) { validate(); }
    explicit WeightVector(std::vector<long> v) : w(std::move(v)) { validate(); }

    std::size_t size() const { return w.size(); }
    long operator[](std::size_t i) const { return w[i]; }

    void validate() const {
        for (long x : w)
            if (x < 1) throw domain_error("WeightVector: entries must be >= 1");
    }

    long gcd_all() const {
        Int g = 0;
        for (long x : w) g = cdv::gcd(g, Int(x));
        return to_long(g);
    }

    WeightVector normalized() const {
        long g = gcd_all();
        std::vector<long> v = w;
        if (g > 1)
            for (long& x : v) x /= g;
        return WeightVector(v);
    }

    bool operator==(const WeightVector& o) const { return w == o.w; }
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are kept in a sorted map on exponent vectors; no stored
/// coefficient is zero.
class Polynomial {
  public:
    using TermMap = std::map<ExpVec, Rat>;

    Polynomial() = default;
    explicit Polynomial(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    static Polynomial zero(std::vector<std::string> vars) { return Polynomial(std::move(vars)); }

    static Polynomial constant(std::vector<std::string> vars, const Rat& c) {
        Polynomial p(std::move(vars));
        if (c != 0) p.terms_[ExpVec(p.vars_.size(), 0)] = c;
        return p;
    }

    static Polynomial variable(const std::vector<std::string>& vars, std::size_t i, unsigned e = 1) {
        Polynomial p(vars);
        ExpVec exp(vars.size(), 0);
        exp[i] = e;
        p.terms_[exp] = 1;
        return p;
    }

    static Polynomial monomial(const std::vector<std::string>& vars, ExpVec exp, const Rat& c) {
        Polynomial p(vars);
        if (exp.size() != vars.size()) throw domain_error("monomial: exponent length mismatch");
        if (c != 0) p.terms_[std::move(exp)] = c;
        return p;
    }

    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool operator==(const Polynomial& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Rat coefficient(const ExpVec& exp) const {
        auto it = terms_.find(exp);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Rat constant_term() const { return coefficient(ExpVec(nvars(), 0)); }

    Rat linear_coefficient(std::size_t i) const {
        ExpVec e(nvars(), 0);
        e[i] = 1;
        return coefficient(e);
    }

    void add_term(const ExpVec& exp, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(exp);
        if (it == terms_.end()) {
            terms_[exp] = c;
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& o) {
        check_same_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check_same_vars(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    Polynomial operator-() const {
        Polynomial r(vars_);
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check_same_vars(b);
        Polynomial r(a.vars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                ExpVec e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    friend Polynomial operator*(const Rat& c, const Polynomial& a) {
        Polynomial r(a.vars_);
        if (c == 0) return r;
        for (const auto& [e, k] : a.terms_) r.terms_[e] = c * k;
        return r;
    }

    Polynomial pow(unsigned n) const {
        Polynomial r = constant(vars_, 1);
        Polynomial base = *this;
        while (n) {
            if (n & 1u) r = r * base;
            base = (n >>= 1) ? base * base : base;
        }
        return r;
    }

    /// Product truncated to total degree <= bound.
    static Polynomial mul_trunc(const Polynomial& a, const Polynomial& b, long bound) {
        a.check_same_vars(b);
        Polynomial r(a.vars_);
        for (const auto& [ea, ca] : a.terms_) {
            long da = total_of(ea);
            if (da > bound) continue;
            for (const auto& [eb, cb] : b.terms_) {
                if (da + total_of(eb) > bound) continue;
                ExpVec e(ea.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    Polynomial pow_trunc(unsigned n, long bound) const {
        Polynomial r = constant(vars_, 1);
        for (unsigned i = 0; i < n; ++i) {
            r = mul_trunc(r, *this, bound);
            if (r.is_zero()) break;
        }
        return r;
    }

    static long total_of(const ExpVec& e) {
        long d = 0;
        for (unsigned x : e) d += x;
        return d;
    }

    /// Total degree; -1 for the zero polynomial.
    long total_degree() const {
        long d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, total_of(e));
        return d;
    }

    /// Order (minimal total degree of a term); -1 for the zero polynomial.
    long order() const {
        long d = -1;
        for (const auto& [e, c] : terms_) {
            long t = total_of(e);
            if (d < 0 || t < d) d = t;
        }
        return d;
    }

    static long weighted_of(const ExpVec& e, const WeightVector& w) {
        long d = 0;
        for (std::size_t i = 0; i < e.size(); ++i) d += static_cast<long>(e[i]) * w[i];
        return d;
    }

    Polynomial truncate_total(long bound) const {
        Polynomial r(vars_);
        for (const auto& [e, c] : terms_)
            if (total_of(e) <= bound) r.terms_[e] = c;
        return r;
    }

    Polynomial derivative(std::size_t i) const {
        Polynomial r(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            ExpVec d = e;
            --d[i];
            r.add_term(d, c * Rat(e[i]));
        }
        return r;
    }

    /// Substitute x_i = 0.
    Polynomial set_var_zero(std::size_t i) const {
        Polynomial r(vars_);
        for (const auto& [e, c] : terms_)
            if (e[i] == 0) r.terms_[e] = c;
        return r;
    }

    /// Restrict to the x_i axis: keep terms supported on x_i only, as a
    /// map exponent -> coefficient.
    std::map<unsigned, Rat> restrict_axis(std::size_t i) const {
        std::map<unsigned, Rat> out;
        for (const auto& [e, c] : terms_) {
            bool pure = true;
            for (std::size_t j = 0; j < e.size(); ++j)
                if (j != i && e[j] != 0) { pure = false; break; }
            if (pure) out[e[i]] = c;
        }
        return out;
    }

    /// Exact composition: every variable of *this is replaced by images[i].
    /// All images must share one variable list, which becomes the result's.
    Polynomial substitute(const std::vector<Polynomial>& images) const {
        if (images.size() != nvars()) throw domain_error("substitute: one image per variable required");
        for (const auto& g : images)
            if (g.vars() != images[0].vars()) throw domain_error("substitute: images disagree on variables");
        Polynomial r(images[0].vars());
        for (const auto& [e, c] : terms_) {
            Polynomial t = constant(images[0].vars(), c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) t = t * images[i].pow(e[i]);
            r += t;
        }
        return r;
    }

    /// Composition truncated to total degree <= bound (jet work).
    Polynomial substitute_trunc(const std::vector<Polynomial>& images, long bound) const {
        if (images.size() != nvars()) throw domain_error("substitute: one image per variable required");
        Polynomial r(images[0].vars());
        for (const auto& [e, c] : terms_) {
            Polynomial t = constant(images[0].vars(), c);
            for (std::size_t i = 0; i < e.size() && !t.is_zero(); ++i)
                if (e[i]) t = mul_trunc(t, images[i].pow_trunc(e[i], bound), bound);
            r += t;
        }
        return r;
    }

    Rat evaluate(const std::vector<Rat>& point) const {
        if (point.size() != nvars()) throw domain_error("evaluate: wrong point dimension");
        Rat acc = 0;
        for (const auto& [e, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                for (unsigned k = 0; k < e[i]; ++k) t *= point[i];
            acc += t;
        }
        return acc;
    }

    /// Canonical text form: terms in sorted exponent order, coefficients as
    /// p/q with "-" folded in, monomials as x^a*y^b.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Rat a = c;
            if (first) {
                if (a < 0) { out += "-"; a = -a; }
            } else {
                out += a < 0 ? " - " : " + ";
                if (a < 0) a = -a;
            }
            first = false;
            std::string mono;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i]) continue;
                if (!mono.empty()) mono += "*";
                mono += vars_[i];
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty()) {
                out += cdv::to_string(a);
            } else {
                if (a != 1) out += cdv::to_string(a) + "*";
                out += mono;
            }
        }
        return out;
    }

    static Polynomial parse(const std::vector<std::string>& vars, const std::string& text);

  private:
    void check_same_vars(const Polynomial& o) const {
        if (vars_ != o.vars_) throw domain_error("polynomial variable lists disagree");
    }

    std::vector<std::string> vars_;
    TermMap terms_;
};

namespace detail {

struct Tokenizer {
    const std::string& s;
    std::size_t pos = 0;

    explicit Tokenizer(const std::string& str) : s(str) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }
    std::string number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw parse_error("expected digits at position " + std::to_string(start));
        return s.substr(start, pos - start);
    }
    std::string name() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
        }
        if (start == pos) throw parse_error("expected a name at position " + std::to_string(start));
        return s.substr(start, pos - start);
    }
};

}  // namespace detail

inline Polynomial Polynomial::parse(const std::vector<std::string>& vars, const std::string& text) {
    detail::Tokenizer tk(text);
    Polynomial out = Polynomial::zero(vars);
    bool first = true;
    while (!tk.eof()) {
        Rat sign = 1;
        if (tk.accept('+')) {
            // explicit plus
        } else if (tk.accept('-')) {
            sign = -1;
        } else if (!first) {
            throw parse_error("expected '+' or '-' between terms");
        }
        first = false;
        // one product of rational and variable-power factors
        Rat coeff = sign;
        ExpVec exp(vars.size(), 0);
        bool any_factor = false;
        while (true) {
            char c = tk.peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                Int num(tk.number());
                Int den = 1;
                if (tk.accept('/')) den = Int(tk.number());
                if (den == 0) throw parse_error("zero denominator");
                coeff *= Rat(num, den);
                any_factor = true;
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string v = tk.name();
                auto it = std::find(vars.begin(), vars.end(), v);
                if (it == vars.end()) throw parse_error("unknown variable '" + v + "'");
                unsigned e = 1;
                if (tk.accept('^')) e = static_cast<unsigned>(std::stoul(tk.number()));
                exp[static_cast<std::size_t>(it - vars.begin())] += e;
                any_factor = true;
            } else {
                break;
            }
            if (!tk.accept('*')) break;
        }
        if (!any_factor) throw parse_error("empty term");
        out.add_term(exp, coeff);
    }
    return out;
}

/// Minimal w-weighted degree over the terms of f; nullopt (infinite) iff f = 0.
inline std::optional<long> weighted_order(const Polynomial& f, const WeightVector& w) {
    if (w.size() != f.nvars()) throw domain_error("weighted_order: dimension mismatch");
    std::optional<long> best;
    for (const auto& [e, c] : f.terms()) {
        long d = Polynomial::weighted_of(e, w);
        if (!best || d < *best) best = d;
    }
    return best;
}

/// Sum of the terms of f of w-degree exactly d.
inline Polynomial weighted_part(const Polynomial& f, const WeightVector& w, long d) {
    if (w.size() != f.nvars()) throw domain_error("weighted_part: dimension mismatch");
    if (d < 0) throw domain_error("weighted_part: negative degree");
    Polynomial r(f.vars());
    for (const auto& [e, c] : f.terms())
        if (Polynomial::weighted_of(e, w) == d) r.add_term(e, c);
    return r;
}

/// Sum of the terms of f of w-degree <= d.
inline Polynomial jet(const Polynomial& f, const WeightVector& w, long d) {
    if (w.size() != f.nvars()) throw domain_error("jet: dimension mismatch");
    if (d < 0) throw domain_error("jet: negative degree");
    Polynomial r(f.vars());
    for (const auto& [e, c] : f.terms())
        if (Polynomial::weighted_of(e, w) <= d) r.add_term(e, c);
    return r;
}

/// Substitution by a per-variable image map (exact composition).
inline Polynomial substitute(const Polynomial& f, const std::vector<Polynomial>& images) {
    return f.substitute(images);
}

/// Rank of the symmetric matrix of second partials at the origin.
/// Requires f to have no constant or linear term.
inline int hessian_rank_at_origin(const Polynomial& f) {
    const std::size_t n = f.nvars();
    if (f.constant_term() != 0) throw domain_error("hessian_rank_at_origin: constant term present");
    for (std::size_t i = 0; i < n; ++i)
        if (f.linear_coefficient(i) != 0)
            throw domain_error("hessian_rank_at_origin: linear term present");
    RatMatrix h(n, std::vector<Rat>(n, Rat(0)));
    for (const auto& [e, c] : f.terms()) {
        if (Polynomial::total_of(e) != 2) continue;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            for (unsigned k = 0; k < e[i]; ++k) idx.push_back(i);
        if (idx[0] == idx[1]) {
            h[idx[0]][idx[0]] += 2 * c;
        } else {
            h[idx[0]][idx[1]] += c;
            h[idx[1]][idx[0]] += c;
        }
    }
    return matrix_rank(h);
}

/// Quadratic part of f as a symmetric matrix (entries M_ij = coeff of x_i x_j
/// halved on the off-diagonal, so that q(x) = x^T M x).
inline RatMatrix quadratic_form(const Polynomial& f) {
    const std::size_t n = f.nvars();
    RatMatrix m(n, std::vector<Rat>(n, Rat(0)));
    for (const auto& [e, c] : f.terms()) {
        if (Polynomial::total_of(e) != 2) continue;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            for (unsigned k = 0; k < e[i]; ++k) idx.push_back(i);
        if (idx[0] == idx[1]) {
            m[idx[0]][idx[0]] += c;
        } else {
            m[idx[0]][idx[1]] += c / 2;
            m[idx[1]][idx[0]] += c / 2;
        }
    }
    return m;
}

}  // namespace cdv
