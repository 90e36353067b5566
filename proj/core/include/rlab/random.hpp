#pragma once

#include <cstdint>
#include <random>

#include "rlab/numeric.hpp"
#include "rlab/rational.hpp"

namespace rlab {

/// Deterministic generator for randomized suites.
using Rng = std::mt19937_64;

/// Numerator uniform in [-9, 9], denominator uniform in {1, ..., 8}.
Rational random_rational(Rng& rng);

/// Numerator uniform in [0, 9], denominator uniform in {1, ..., 8}.
Rational random_nonnegative_rational(Rng& rng);

/// Table of random_rational entries on 1..size.
Table<Rational> random_rational_table(Rng& rng, std::size_t size);

/// Like random_rational_table but each entry is zero with probability
/// `zero_probability`.
Table<Rational> random_sparse_table(Rng& rng, std::size_t size, double zero_probability);

/// Uniform integer in [lo, hi].
std::uint64_t random_integer(Rng& rng, std::uint64_t lo, std::uint64_t hi);

}  // namespace rlab
