#include "poslab/sampling.hpp"

#include <cmath>

namespace poslab {

template <class T>
T lognormal_scalar(Rng& rng, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  const double x = std::exp(normal(rng));
  if constexpr (Field<T>::exact) {
    Rational q = dyadic_round(x, 20);
    if (sgn(q) <= 0) q = Rational(1, 1 << 20);
    return q;
  } else {
    return x;
  }
}

template <class T>
Matrix<T> random_sl(std::size_t n, Rng& rng, int steps, int max_entry) {
  if (steps <= 0) steps = static_cast<int>(3 * n);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> val(-max_entry, max_entry);
  Matrix<T> g = Matrix<T>::identity(n);
  for (int s = 0; s < steps; ++s) {
    std::size_t i = idx(rng), j = idx(rng);
    while (j == i) j = idx(rng);
    int v = val(rng);
    if (v == 0) v = 1;
    // row_i += v * row_j
    for (std::size_t c = 0; c < n; ++c) g(i, c) += T(v) * g(j, c);
  }
  return g;
}

template <class T>
Flag<T> random_flag(std::size_t n, Rng& rng, int max_entry) {
  std::uniform_int_distribution<int> val(-max_entry, max_entry);
  while (true) {
    MatrixQ m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = val(rng);
    if (sgn(determinant(m)) == 0) continue;
    if constexpr (Field<T>::exact) {
      return make_flag(m);
    } else {
      return make_flag(to_double(m));
    }
  }
}

template Rational lognormal_scalar<Rational>(Rng&, double);
template double lognormal_scalar<double>(Rng&, double);
template MatrixQ random_sl<Rational>(std::size_t, Rng&, int, int);
template MatrixD random_sl<double>(std::size_t, Rng&, int, int);
template FlagQ random_flag<Rational>(std::size_t, Rng&, int);
template FlagD random_flag<double>(std::size_t, Rng&, int);

}  // namespace poslab
