#pragma once

#include <cstddef>
#include <vector>

#include "poslab/flags.hpp"

namespace poslab {

template <class T>
struct Sl2Triple {
  Matrix<T> e, h, f;
};

/// h = diag(n-1, n-3, ..., 1-n), f = subdiagonal ones, e_{i,i+1} = i(n-i).
template <class T>
Sl2Triple<T> principal_sl2(std::size_t n);

/// exp of a nilpotent matrix (finite sum).
template <class T>
Matrix<T> exp_nilpotent(const Matrix<T>& m);

/// Image of g in SL(2) under the irreducible n-dimensional representation
/// normalized by principal_sl2 (unipotents go to exp(s e), exp(s f)).
template <class T>
Matrix<T> sym_power(const Matrix<T>& g, std::size_t n);

/// Projective point [x : y] of P^1; [1 : 0] is infinity.
template <class T>
struct CirclePoint {
  T x{1};
  T y{0};
};

template <class T>
bool same_point(const CirclePoint<T>& p, const CirclePoint<T>& q);

/// Mobius action of a 2x2 matrix.
template <class T>
CirclePoint<T> apply(const Matrix<T>& g, const CirclePoint<T>& p);

/// Some g in SL(2) with g.[1:0] = p.
template <class T>
Matrix<T> lift(const CirclePoint<T>& p);

/// [1:0] -> standard flag, [0:1] -> antistandard, [t:1] -> exp(t e).antistandard.
template <class T>
Flag<T> circle_map(const CirclePoint<T>& p, std::size_t n);

/// Monotone rational parametrization of P^1 by turns: theta in [0,1) maps to
/// [1 - 2 theta : 2 theta (1 - theta)], so 0 -> infinity, 1/2 -> 0, and the
/// affine coordinate decreases as theta increases.
CirclePoint<Rational> turn_point(const Rational& theta);
CirclePoint<double> turn_point(double theta);

/// t -> g^{-1} delta circle_map(t) with g = normalize_pair(a, b) (trivial
/// class) and delta = diag(d_1, ..., d_{n-1}, 1/prod).
template <class T>
struct PositiveCircle {
  Matrix<T> base;  // g^{-1} delta
  std::size_t n = 0;
  Flag<T> at(const CirclePoint<T>& p) const;
};

template <class T>
PositiveCircle<T> circle_through(const Flag<T>& a, const Flag<T>& b, const std::vector<T>& torus_param);

/// Orthogonal iteration on m; the k-th subspace converges to the sum of the k
/// eigenspaces of largest modulus. tol is on successive flag distances.
FlagD attracting_flag(const MatrixD& m, double tol = 1e-12, int max_iter = 10000, int* iterations = nullptr);

struct ProximalityReport {
  bool hyperbolic = false;
  bool simple_gaps = false;    // strict modulus gaps, hence simple top eigenvalue on each exterior power
  bool flag_matches = false;   // attracting flag = circle_map(attracting point)
  std::vector<double> moduli;  // eigenvalue moduli of the image, decreasing
  double distance = 0.0;       // float variant only
};

/// Exact variant: g = c diag(lambda, 1/lambda) c^{-1} with rational data.
ProximalityReport proximality_report(const MatrixQ& c, const Rational& lambda, std::size_t n);
/// Float variant for an arbitrary 2x2 matrix; parabolic/elliptic input is
/// reported as non-hyperbolic.
ProximalityReport proximality_report(const MatrixD& g, std::size_t n);

/// Number of free parameters of diagonal matrices commuting with all of mats
/// (= connected components of the off-diagonal support graph). One means the
/// torus part of the centralizer is scalar.
template <class T>
std::size_t diagonal_centralizer_rank(const std::vector<Matrix<T>>& mats);

}  // namespace poslab
