#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>

namespace chiralkit {

// Exact arithmetic everywhere. Rational is GMP's canonical mpq; Integer is mpz.
using Rational = mpq_class;
using Integer = mpz_class;

// Parses "p", "-p/q" or a plain decimal such as "1.25" into a canonical rational.
Rational parse_rational(const std::string& text);

// Emits "p" or "p/q" (canonical form, q > 1 only when needed).
std::string rational_to_string(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// Exact conversion; throws if q is not an integer or does not fit in int64.
std::int64_t to_int64(const Rational& q);

inline constexpr int kRank = 5;
using IVec = std::array<std::int64_t, kRank>;
using QVec = std::array<Rational, kRank>;

}  // namespace chiralkit
