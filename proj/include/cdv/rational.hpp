#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cdv {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated internal invariant; maps to exit code 5 in the CLI.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline Int gcd(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

/// Smallest nonnegative residue of a mod m (m > 0).
inline Int mod_reduce(const Int& a, const Int& m) {
    if (m <= 0) throw domain_error("mod_reduce: modulus must be positive");
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

/// Inverse of a mod m; throws if gcd(a, m) != 1.
inline Int mod_inverse(const Int& a, const Int& m) {
    if (m <= 0) throw domain_error("mod_inverse: modulus must be positive");
    Int r0 = m, r1 = mod_reduce(a, m), s0 = 0, s1 = 1;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw domain_error("mod_inverse: arguments are not coprime");
    return mod_reduce(s0, m);
}

inline long to_long(const Int& v) {
    if (v > std::numeric_limits<long>::max() || v < std::numeric_limits<long>::min())
        throw domain_error("integer too large for machine word");
    return static_cast<long>(v);
}

inline Int numerator(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denominator(const Rat& q) { return boost::multiprecision::denominator(q); }

inline bool is_integer(const Rat& q) { return denominator(q) == 1; }

inline Int floor_div(const Int& a, const Int& b) {
    if (b <= 0) throw domain_error("floor_div: divisor must be positive");
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

inline std::string to_string(const Int& v) { return v.str(); }

/// "p" when integral, "p/q" otherwise.
inline std::string to_string(const Rat& q) {
    if (is_integer(q)) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

inline Rat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw parse_error("zero denominator in '" + s + "'");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw parse_error("malformed rational '" + s + "'");
    }
}

/// Deterministic 64-bit LCG (Knuth multiplier); used everywhere randomness is
/// needed so that runs are reproducible bit for bit across platforms.
class Lcg {
  public:
    explicit Lcg(std::uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next() {
        state_ = state_ * 6364136223846793005ull + 1442695040888963407ull;
        return state_;
    }

    /// Uniform-ish integer in [lo, hi].
    long range(long lo, long hi) {
        if (hi < lo) throw domain_error("Lcg::range: empty interval");
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>((next() >> 16) % span);
    }

    /// Nonzero integer in [-7, 7], the hyperplane-coefficient alphabet.
    long small_nonzero() {
        long v = range(-7, 6);
        return v >= 0 ? v + 1 : v;
    }

  private:
    std::uint64_t state_;
};

}  // namespace cdv
