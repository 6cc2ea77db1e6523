#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace freeset {

// Exact rational scalar used for all stored coordinates and predicates.
using Q = mpq_class;

/// Typed error with a stable machine-readable code (surfaced by the CLI).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

inline void require(bool ok, const std::string& code, const std::string& message) {
    if (!ok) fail(code, message);
}

inline int sign(const Q& q) { return sgn(q); }

inline Q q_abs(const Q& q) { return q < 0 ? Q(-q) : q; }

inline Q q_min(const Q& a, const Q& b) { return a < b ? a : b; }
inline Q q_max(const Q& a, const Q& b) { return a > b ? a : b; }

/// Exact conversion; doubles are binary rationals.
inline Q q_from_double(double d) {
    if (!std::isfinite(d)) fail("NON_FINITE", "cannot convert non-finite double to rational");
    return Q(d);
}

/// Parses "p/q", integers, plain decimals ("-12.5") and scientific notation
/// ("1.25e-3"), all exactly.
Q q_from_string(const std::string& s);

/// Finite decimal when the reduced denominator is 2^a*5^b, otherwise "p/q".
std::string q_to_string(const Q& q);

/// Deterministic splitmix64-based generator for exact rational jitter.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    /// Exact rational uniform in (0, 1): k/2^20 with 0 < k < 2^20.
    Q unit() {
        std::uint64_t k = 1 + below((1ULL << 20) - 1);
        return Q(static_cast<unsigned long>(k), 1UL << 20);
    }

    /// Exact rational in (lo, hi).
    Q between(const Q& lo, const Q& hi) { return lo + unit() * (hi - lo); }

private:
    std::uint64_t state_;
};

}  // namespace freeset
