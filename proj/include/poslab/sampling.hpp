#pragma once

#include <cstdint>
#include <random>

#include "poslab/flags.hpp"

namespace poslab {

using Rng = std::mt19937_64;

/// Log-normal draw (median 1, sigma 1) converted to the target scalar; exact
/// mode rounds to a dyadic with 20 fractional bits and never returns 0.
template <class T>
T lognormal_scalar(Rng& rng, double sigma = 1.0);

/// Random element of SL(n) with small integer entries: a product of random
/// elementary transvections, so det = 1 exactly.
template <class T>
Matrix<T> random_sl(std::size_t n, Rng& rng, int steps = 0, int max_entry = 3);

/// Random rational flag from a full-rank integer matrix.
template <class T>
Flag<T> random_flag(std::size_t n, Rng& rng, int max_entry = 5);

}  // namespace poslab
