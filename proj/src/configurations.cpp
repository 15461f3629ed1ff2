#include "poslab/configurations.hpp"

#include <algorithm>
#include <numeric>

namespace poslab {

template <class T>
PositivityOracle<T>::PositivityOracle(const std::vector<Flag<T>>& points) : points_(points) {}

template <class T>
bool PositivityOracle<T>::transverse(std::size_t i, std::size_t j) {
  const auto key = std::minmax(i, j);
  auto it = transverse_.find({key.first, key.second});
  if (it != transverse_.end()) return it->second;
  const bool t = i != j && is_transverse(points_[i], points_[j]);
  transverse_.emplace(std::pair{key.first, key.second}, t);
  return t;
}

template <class T>
const std::optional<Certificate<T>>& PositivityOracle<T>::certificate(std::size_t i, std::size_t j, std::size_t k) {
  const std::array<std::size_t, 3> key{i, j, k};
  auto it = certs_.find(key);
  if (it != certs_.end()) return it->second;
  return certs_.emplace(key, component_certificate(points_[i], points_[j], points_[k])).first->second;
}

template <class T>
bool PositivityOracle<T>::triple(std::size_t i, std::size_t j, std::size_t k) {
  if (!transverse(i, j) || !transverse(j, k) || !transverse(i, k)) return false;
  return certificate(j, k, i).has_value() && certificate(i, k, j).has_value() && certificate(i, j, k).has_value();
}

template <class T>
bool PositivityOracle<T>::quadruple(std::size_t i, std::size_t x, std::size_t j, std::size_t y) {
  if (!triple(i, x, j) || !triple(x, j, y) || !triple(j, y, i) || !triple(y, i, x)) return false;
  return *certificate(i, j, x) == opposite_certificate(*certificate(i, j, y));
}

template <class T>
bool is_positive_triple(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c) {
  PositivityOracle<T> o({a, b, c});
  return o.triple(0, 1, 2);
}

template <class T>
bool is_positive_quadruple(const Flag<T>& a, const Flag<T>& x, const Flag<T>& b, const Flag<T>& y) {
  PositivityOracle<T> o({a, x, b, y});
  return o.quadruple(0, 1, 2, 3);
}

template <class T>
bool is_positive_configuration(Configuration<T>& cfg) {
  const std::size_t p = cfg.points.size();
  require(p >= 3, ErrorCode::InvalidArgument, "configurations need at least three points");
  cfg.certified_diamonds.clear();
  PositivityOracle<T> o(cfg.points);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      for (std::size_t k = j + 1; k < p; ++k) {
        if (!o.triple(i, j, k)) return false;
        for (std::size_t l = k + 1; l < p; ++l)
          if (!o.quadruple(i, j, k, l)) return false;
      }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      if (i == j) continue;
      const std::size_t inside = (i + 1) % p;
      if (inside != j) {
        cfg.certified_diamonds.emplace(std::pair{i, j}, make_diamond(cfg.points[i], cfg.points[j], cfg.points[inside]));
      } else {
        // nothing strictly between: opposite of the diamond seen from the other side
        const std::size_t outside = (j + 1) % p;
        cfg.certified_diamonds.emplace(
            std::pair{i, j}, opposite(make_diamond(cfg.points[i], cfg.points[j], cfg.points[outside])));
      }
    }
  return true;
}

template <class T>
bool is_positive_configuration(const std::vector<Flag<T>>& points) {
  if (points.size() < 3) return false;
  const std::size_t p = points.size();
  PositivityOracle<T> o(points);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      for (std::size_t k = j + 1; k < p; ++k) {
        if (!o.triple(i, j, k)) return false;
        for (std::size_t l = k + 1; l < p; ++l)
          if (!o.quadruple(i, j, k, l)) return false;
      }
  return true;
}

template <class T>
DihedralReport dihedral_invariance_report(const std::array<Flag<T>, 4>& quad) {
  static const std::array<std::array<int, 4>, 8> dihedral{{{0, 1, 2, 3},
                                                           {1, 2, 3, 0},
                                                           {2, 3, 0, 1},
                                                           {3, 0, 1, 2},
                                                           {3, 2, 1, 0},
                                                           {2, 1, 0, 3},
                                                           {1, 0, 3, 2},
                                                           {0, 3, 2, 1}}};
  PositivityOracle<T> o({quad[0], quad[1], quad[2], quad[3]});
  DihedralReport rep;
  for (std::size_t k = 0; k < 8; ++k) {
    const auto& s = dihedral[k];
    rep.dihedral[k] = o.quadruple(s[0], s[1], s[2], s[3]);
  }
  rep.dihedral_agree = std::all_of(rep.dihedral.begin(), rep.dihedral.end(), [&](bool b) { return b == rep.dihedral[0]; });
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    if (std::find(dihedral.begin(), dihedral.end(), perm) != dihedral.end()) continue;
    if (o.quadruple(perm[0], perm[1], perm[2], perm[3])) {
      ++rep.other_positive;
      rep.other_positive_orders.push_back(perm);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return rep;
}

template <class T>
std::size_t triple_permutation_count(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c) {
  PositivityOracle<T> o({a, b, c});
  std::array<int, 3> perm{0, 1, 2};
  std::size_t count = 0;
  do {
    count += o.triple(perm[0], perm[1], perm[2]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

template <class T>
std::array<Flag<T>, 4> random_positive_quadruple(std::size_t n, Rng& rng, bool move) {
  const Flag<T> a = standard_flag<T>(n);
  const Flag<T> b = antistandard_flag<T>(n);
  const Flag<T> c = act(psi(random_params<T>(n, rng)), b);
  const Flag<T> d = sample_diamond(opposite(make_diamond(c, b, a)), rng);
  if (!move) return {a, c, d, b};
  const Matrix<T> g = random_sl<T>(n, rng);
  return {act(g, a), act(g, c), act(g, d), act(g, b)};
}

template <class T>
std::array<Flag<T>, 3> random_positive_triple(std::size_t n, Rng& rng, bool move) {
  const Flag<T> a = standard_flag<T>(n);
  const Flag<T> b = antistandard_flag<T>(n);
  const Flag<T> c = act(psi(random_params<T>(n, rng)), b);
  if (!move) return {a, c, b};
  const Matrix<T> g = random_sl<T>(n, rng);
  return {act(g, a), act(g, c), act(g, b)};
}

template <class T>
bool necklace_check(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c, Rng& rng, std::size_t trials) {
  if (trials == 0) return true;
  // each sample sits on the side of its pair away from the third point, so that
  // (a, gamma, b, alpha, c, beta) is cyclically ordered
  const Diamond<T> va = opposite(make_diamond(b, c, a));
  const Diamond<T> vb = opposite(make_diamond(a, c, b));
  const Diamond<T> vc = opposite(make_diamond(a, b, c));
  for (std::size_t t = 0; t < trials; ++t)
    if (!is_positive_triple(sample_diamond(va, rng), sample_diamond(vb, rng), sample_diamond(vc, rng)))
      return false;
  return true;
}

template <class T>
ExclusionReport exclusion_suite(std::size_t n, Rng& rng, std::size_t trials) {
  ExclusionReport rep;
  rep.trials = trials;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto q = random_positive_quadruple<T>(n, rng);
    if (is_positive_quadruple(q[0], q[2], q[1], q[3])) ++rep.triple_failures;

    const Diamond<T> v = make_diamond(q[0], q[2], q[1]);
    const Diamond<T> vs = opposite(v);
    std::vector<Flag<T>> pts{q[0], q[2]};
    for (int k = 0; k < 3; ++k) pts.push_back(sample_diamond(coin(rng) ? v : vs, rng));
    PositivityOracle<T> o(pts);
    std::size_t count = o.quadruple(0, 2, 1, 3) + o.quadruple(0, 3, 1, 4) + o.quadruple(0, 4, 1, 2);
    ++rep.positive_count_histogram[count];
    if (count == 3) ++rep.quadruple_failures;
  }
  return rep;
}

template <class T>
LusztigParams<T> extreme_params(std::size_t n, Rng& rng) {
  LusztigParams<T> p = random_params<T>(n, rng);
  std::uniform_int_distribution<int> pick(0, 4);
  for (auto& t : p.t) {
    const int r = pick(rng);
    if (r == 0) {
      if constexpr (Field<T>::exact) t = Rational(1, 1000000); else t = 1e-6;
    } else if (r == 1) {
      t = T(1000000);
    }
  }
  return p;
}

template <class T>
bool inclusion_check(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c, const Flag<T>& d, Rng& rng,
                     std::size_t trials) {
  const Diamond<T> inner = opposite(make_diamond(b, c, d));  // V^d(b,c)
  const Diamond<T> outer = make_diamond(a, d, b);            // V_b(a,d)
  for (std::size_t t = 0; t < trials; ++t)
    if (!diamond_contains(outer, diamond_point(inner, extreme_params<T>(a.n(), rng)))) return false;
  return true;
}

template <class T>
std::vector<Flag<T>> insert_between(const std::vector<Flag<T>>& points, std::size_t i, Rng& rng) {
  const std::size_t p = points.size();
  require(p >= 3, ErrorCode::InvalidArgument, "need at least three points");
  const Flag<T>& x0 = points[i % p];
  const Flag<T>& x1 = points[(i + 1) % p];
  const Flag<T>& x2 = points[(i + 2) % p];
  std::vector<Flag<T>> out = points;
  out.insert(out.begin() + static_cast<std::ptrdiff_t>(i % p + 1), sample_diamond(opposite(make_diamond(x0, x1, x2)), rng));
  return out;
}

template <class T>
Flag<T> projective_point(const T& x, const T& y) {
  require(!(Field<T>::is_zero(x) && Field<T>::is_zero(y)), ErrorCode::InvalidArgument, "zero vector");
  Matrix<T> m(2, 2);
  m(0, 0) = x;
  m(1, 0) = y;
  if (Field<T>::is_zero(x)) m(0, 1) = T(1); else m(1, 1) = T(1);
  return make_flag(m);
}

#define POSLAB_INSTANTIATE(T)                                                                                  \
  template class PositivityOracle<T>;                                                                          \
  template bool is_positive_triple<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&);                         \
  template bool is_positive_quadruple<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&, const Flag<T>&);      \
  template bool is_positive_configuration<T>(Configuration<T>&);                                               \
  template bool is_positive_configuration<T>(const std::vector<Flag<T>>&);                                     \
  template DihedralReport dihedral_invariance_report<T>(const std::array<Flag<T>, 4>&);                        \
  template std::size_t triple_permutation_count<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&);            \
  template std::array<Flag<T>, 4> random_positive_quadruple<T>(std::size_t, Rng&, bool);                       \
  template std::array<Flag<T>, 3> random_positive_triple<T>(std::size_t, Rng&, bool);                          \
  template bool necklace_check<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&, Rng&, std::size_t);          \
  template ExclusionReport exclusion_suite<T>(std::size_t, Rng&, std::size_t);                                 \
  template LusztigParams<T> extreme_params<T>(std::size_t, Rng&);                                              \
  template bool inclusion_check<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&, const Flag<T>&, Rng&,       \
                                   std::size_t);                                                               \
  template std::vector<Flag<T>> insert_between<T>(const std::vector<Flag<T>>&, std::size_t, Rng&);             \
  template Flag<T> projective_point<T>(const T&, const T&);

POSLAB_INSTANTIATE(Rational)
POSLAB_INSTANTIATE(double)
#undef POSLAB_INSTANTIATE

}  // namespace poslab
