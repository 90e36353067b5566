#include "rlab/random.hpp"

namespace rlab {

std::uint64_t random_integer(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

Rational random_rational(Rng& rng) {
  const auto num = static_cast<std::int64_t>(random_integer(rng, 0, 18)) - 9;
  const auto den = static_cast<std::int64_t>(random_integer(rng, 1, 8));
  return Rational(num, den);
}

Rational random_nonnegative_rational(Rng& rng) {
  const auto num = static_cast<std::int64_t>(random_integer(rng, 0, 9));
  const auto den = static_cast<std::int64_t>(random_integer(rng, 1, 8));
  return Rational(num, den);
}

Table<Rational> random_rational_table(Rng& rng, std::size_t size) {
  Table<Rational> t(size);
  for (std::uint64_t n = 1; n <= size; ++n) t[n] = random_rational(rng);
  return t;
}

Table<Rational> random_sparse_table(Rng& rng, std::size_t size, double zero_probability) {
  Table<Rational> t(size);
  std::bernoulli_distribution zero(zero_probability);
  for (std::uint64_t n = 1; n <= size; ++n) {
    // Draw both so the stream does not depend on the coin.
    const bool z = zero(rng);
    Rational r = random_rational(rng);
    if (!z) t[n] = r;
  }
  return t;
}

}  // namespace rlab
