#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arrowc {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "num/den" or an integer literal. Throws Error(kParse).
Rational parse_rational(std::string_view text);

/// Always "num/den" in lowest terms, e.g. "1/1", "3/4".
std::string format_rational(const Rational& q);

double to_double(const Rational& q);

Rational sum(std::span<const Rational> values);

/// -p ln p in nats, 0 for p == 0.
double entropy_term(const Rational& p);

/// Shannon entropy (nats) of exact weights; zero entries are skipped.
double entropy_of(std::span<const Rational> weights);

/// Least common multiple of all denominators.
BigInt common_denominator(std::span<const Rational> values);

}  // namespace arrowc
