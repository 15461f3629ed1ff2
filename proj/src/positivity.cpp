#include "poslab/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "poslab/weyl.hpp"

namespace poslab {

Word default_reduced_word(std::size_t n) {
  Word w;
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = k; i >= 1; --i) w.push_back(static_cast<int>(i));
  return w;
}

bool is_reduced_word_for_w0(std::size_t n, const Word& word) {
  if (word.size() != n * (n - 1) / 2) return false;
  std::vector<int> letters;
  for (int i : word) {
    if (i < 1 || i >= static_cast<int>(n)) return false;
    letters.push_back(i - 1);
  }
  return from_word(n, letters) == longest_perm(n);
}

template <class T>
Matrix<T> elementary(std::size_t n, int letter, const T& t) {
  require(letter >= 1 && letter < static_cast<int>(n), ErrorCode::InvalidArgument, "letter out of range");
  Matrix<T> m = Matrix<T>::identity(n);
  m(letter - 1, letter) = t;
  return m;
}

namespace {

template <class T>
Matrix<T> psi_impl(const LusztigParams<T>& p, std::size_t n) {
  Matrix<T> u = Matrix<T>::identity(n);
  for (std::size_t k = 0; k < p.word.size(); ++k) {
    // u <- u * (I + t E_{i,i+1}): column i+1 += t * column i
    const std::size_t c = static_cast<std::size_t>(p.word[k] - 1);
    for (std::size_t r = 0; r <= c; ++r) u(r, c + 1) += p.t[k] * u(r, c);
  }
  return u;
}

std::size_t dimension_of(const Word& word) {
  // N = n(n-1)/2
  std::size_t n = 2;
  while (n * (n - 1) / 2 < word.size()) ++n;
  return n;
}

void validate(const Word& word, std::size_t nt) {
  require(word.size() == nt, ErrorCode::InvalidArgument, "word and parameter lengths differ");
  require(is_reduced_word_for_w0(dimension_of(word), word), ErrorCode::InvalidArgument,
          "not a reduced word for the longest element");
}

}  // namespace

template <class T>
Matrix<T> psi(const LusztigParams<T>& p) {
  validate(p.word, p.t.size());
  for (const T& t : p.t)
    if (Field<T>::sign(t) <= 0) fail(ErrorCode::NonPositiveParameter, "psi needs positive parameters");
  return psi_impl(p, dimension_of(p.word));
}

template <class T>
Matrix<T> psi_closed(const LusztigParams<T>& p) {
  validate(p.word, p.t.size());
  for (const T& t : p.t)
    if (t < 0) fail(ErrorCode::NonPositiveParameter, "closed psi needs nonnegative parameters");
  return psi_impl(p, dimension_of(p.word));
}

template <class T>
LusztigParams<T> random_params(std::size_t n, Rng& rng, const Word& word) {
  LusztigParams<T> p;
  p.word = word.empty() ? default_reduced_word(n) : word;
  for (std::size_t k = 0; k < p.word.size(); ++k) p.t.push_back(lognormal_scalar<T>(rng));
  return p;
}

namespace {

bool dominated(const std::vector<std::size_t>& I, const std::vector<std::size_t>& J) {
  for (std::size_t l = 0; l < I.size(); ++l)
    if (I[l] > J[l]) return false;
  return true;
}

}  // namespace

const std::vector<MinorIndex>& positivity_minors(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<MinorIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<MinorIndex> out;
  for (std::size_t k = 1; k < n; ++k) {
    const auto sets = subsets(n, k);
    for (const auto& I : sets)
      for (const auto& J : sets)
        if (I != J && dominated(I, J)) out.push_back(MinorIndex{I, J});
  }
  return cache.emplace(n, std::move(out)).first->second;
}

template <class T>
bool is_upper_unipotent(const Matrix<T>& u) {
  if (u.rows() != u.cols()) return false;
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t c = 0; c <= r; ++c) {
      if (r == c && !(u(r, c) == T(1))) return false;
      if (r != c && !Field<T>::is_zero(u(r, c))) return false;
    }
  return true;
}

template <class T>
T min_positivity_minor(const Matrix<T>& u) {
  require(u.rows() >= 2, ErrorCode::InvalidArgument, "dimension must be at least 2");
  const auto& minors = positivity_minors(u.rows());
  T best = minor(u, minors.front().rows, minors.front().cols);
  for (std::size_t k = 1; k < minors.size(); ++k) {
    T v = minor(u, minors[k].rows, minors[k].cols);
    if (v < best) best = v;
  }
  return best;
}

template <class T>
bool in_positive_semigroup(const Matrix<T>& u) {
  require(is_upper_unipotent(u), ErrorCode::InvalidArgument, "expected an upper unipotent matrix");
  const auto& minors = positivity_minors(u.rows());
  for (const auto& m : minors)
    if (Field<T>::sign(minor(u, m.rows, m.cols)) <= 0) return false;
  return true;
}

namespace {

struct PlanStep {
  std::size_t row;  // 0-based row of the letter
  std::vector<std::size_t> I, Ip, J;
};

std::vector<std::size_t> shift_row(const std::vector<std::size_t>& I, std::size_t r) {
  std::vector<std::size_t> out = I;
  for (auto& v : out)
    if (v == r) v = r + 1;
  std::sort(out.begin(), out.end());
  return out;
}

bool contains(const std::vector<std::size_t>& I, std::size_t r) {
  return std::find(I.begin(), I.end(), r) != I.end();
}

// Candidates for letter row r: (I, J) with r in I, r+1 not in I, (I', J) nonvanishing.
std::vector<MinorIndex> peel_candidates(std::size_t n, std::size_t r) {
  std::vector<MinorIndex> out;
  for (std::size_t k = 1; k < n; ++k) {
    const auto sets = subsets(n, k);
    for (const auto& I : sets) {
      if (!contains(I, r) || contains(I, r + 1)) continue;
      const auto Ip = shift_row(I, r);
      for (const auto& J : sets)
        if (dominated(Ip, J)) out.push_back(MinorIndex{I, J});
    }
  }
  return out;
}

// For each step, the minors attaining the exact minimum ratio on a reference point.
std::vector<std::vector<std::size_t>> binding_minors(const MatrixQ& u0, std::size_t n, const Word& word,
                                                     const std::vector<std::vector<MinorIndex>>& cands) {
  std::vector<std::vector<std::size_t>> out;
  MatrixQ u = u0;
  for (std::size_t k = 0; k < word.size(); ++k) {
    const std::size_t r = static_cast<std::size_t>(word[k] - 1);
    std::optional<Rational> best;
    std::vector<std::size_t> arg;
    for (std::size_t c = 0; c < cands[k].size(); ++c) {
      const auto& m = cands[k][c];
      const Rational den = minor(u, shift_row(m.rows, r), m.cols);
      if (sgn(den) <= 0) continue;
      const Rational ratio = minor(u, m.rows, m.cols) / den;
      if (!best || ratio < *best) {
        best = ratio;
        arg = {c};
      } else if (ratio == *best) {
        arg.push_back(c);
      }
    }
    if (!best) fail(ErrorCode::InvalidArgument, "no factorization plan for this word");
    out.push_back(arg);
    for (std::size_t j = 0; j < n; ++j) u(r, j) -= *best * u(r + 1, j);
  }
  return out;
}

const std::vector<PlanStep>& factorization_plan(std::size_t n, const Word& word) {
  static std::mutex mu;
  static std::map<Word, std::vector<PlanStep>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(word);
  if (it != cache.end()) return it->second;

  std::vector<std::vector<MinorIndex>> cands;
  for (int letter : word) cands.push_back(peel_candidates(n, static_cast<std::size_t>(letter - 1)));

  const std::size_t N = word.size();
  std::vector<LusztigParams<Rational>> refs(3);
  for (std::size_t k = 0; k < N; ++k) {
    refs[0].t.push_back(Rational(1));
    refs[1].t.push_back(Rational(static_cast<long>(k + 1)));
    Rational q(static_cast<long>((7 * k) % 11 + 1), static_cast<long>((3 * k) % 5 + 1));
    q.canonicalize();
    refs[2].t.push_back(q);
  }
  std::vector<std::vector<std::size_t>> common;
  for (auto& ref : refs) {
    ref.word = word;
    auto b = binding_minors(psi_impl(ref, n), n, word, cands);
    if (common.empty()) {
      common = b;
      continue;
    }
    for (std::size_t k = 0; k < N; ++k) {
      std::vector<std::size_t> keep;
      std::set_intersection(common[k].begin(), common[k].end(), b[k].begin(), b[k].end(),
                            std::back_inserter(keep));
      common[k] = keep;
    }
  }
  std::vector<PlanStep> plan;
  for (std::size_t k = 0; k < N; ++k) {
    require(!common[k].empty(), ErrorCode::InvalidArgument, "no stable binding minor");
    const std::size_t r = static_cast<std::size_t>(word[k] - 1);
    // candidates are ordered by size, so the first common one is a smallest minor
    const auto& m = cands[k][common[k].front()];
    plan.push_back(PlanStep{r, m.rows, shift_row(m.rows, r), m.cols});
  }
  return cache.emplace(word, std::move(plan)).first->second;
}

}  // namespace

template <class T>
LusztigParams<T> factorize(const Matrix<T>& u, const Word& word_in) {
  const std::size_t n = u.rows();
  require(is_upper_unipotent(u), ErrorCode::InvalidArgument, "expected an upper unipotent matrix");
  const Word word = word_in.empty() ? default_reduced_word(n) : word_in;
  require(is_reduced_word_for_w0(n, word), ErrorCode::InvalidArgument, "not a reduced word for w0");
  if constexpr (Field<T>::exact) {
    if (!in_positive_semigroup(u)) fail(ErrorCode::NotInOpenSemigroup, "matrix is not totally positive");
  }
  const auto& plan = factorization_plan(n, word);
  LusztigParams<T> out{word, {}};
  Matrix<T> v = u;
  for (const auto& step : plan) {
    const T den = minor(v, step.Ip, step.J);
    if (!(den > 0)) fail(ErrorCode::NotInOpenSemigroup, "vanishing peel denominator");
    const T t = minor(v, step.I, step.J) / den;
    if (!(t > 0)) fail(ErrorCode::NotInOpenSemigroup, "nonpositive peeled parameter");
    for (std::size_t j = 0; j < n; ++j) v(step.row, j) -= t * v(step.row + 1, j);
    out.t.push_back(t);
  }
  if constexpr (Field<T>::exact) {
    if (!(v == MatrixQ::identity(n))) fail(ErrorCode::NotInOpenSemigroup, "nonidentity remainder");
  } else {
    double scale = 1.0, err = 0.0;
    for (double x : u.data()) scale = std::max(scale, std::fabs(x));
    const MatrixD id = MatrixD::identity(n);
    for (std::size_t k = 0; k < v.data().size(); ++k) err = std::max(err, std::fabs(v.data()[k] - id.data()[k]));
    if (err > 1e-7 * scale) fail(ErrorCode::NotInOpenSemigroup, "nonidentity remainder");
  }
  return out;
}

const char* side_name(Side s) { return s == Side::Plus ? "Plus" : "Minus"; }

std::vector<int> full_signs(const SignClass& sc) {
  std::vector<int> eps = sc.eps;
  int prod = 1;
  for (int e : sc.eps) prod *= e;
  eps.push_back(prod);
  return eps;
}

namespace {

int product(const std::vector<int>& eps) {
  int p = 1;
  for (int e : eps) p *= e;
  return p;
}

std::size_t class_index(const std::vector<int>& eps) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i + 1 < eps.size(); ++i)
    if (eps[i] < 0) idx |= std::size_t{1} << i;
  return idx;
}

std::vector<int> negated(std::vector<int> eps) {
  for (int& e : eps) e = -e;
  return eps;
}

std::vector<int> alternated(std::vector<int> eps) {
  for (std::size_t i = 1; i < eps.size(); i += 2) eps[i] = -eps[i];
  return eps;
}

Side flip(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }

}  // namespace

SignClass canonical_class(std::vector<int> eps, Side& side) {
  require(product(eps) == 1, ErrorCode::InvalidArgument, "sign vector outside SL");
  std::vector<std::pair<std::vector<int>, Side>> reps{
      {eps, side}, {negated(eps), side}, {alternated(eps), flip(side)}, {negated(alternated(eps)), flip(side)}};
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < reps.size(); ++k) {
    if (product(reps[k].first) != 1) continue;
    if (!best || class_index(reps[k].first) < class_index(reps[*best].first)) best = k;
  }
  side = reps[*best].second;
  std::vector<int> head(reps[*best].first.begin(), reps[*best].first.end() - 1);
  return SignClass{head};
}

template <class T>
Certificate<T> opposite_certificate(const Certificate<T>& c) {
  Side side = flip(c.side);
  SignClass sc = canonical_class(full_signs(c.sign_class), side);
  return Certificate<T>{sc, side, c.min_minor};
}

namespace {

template <class T>
Matrix<T> conjugate_by_signs(const Matrix<T>& u, const std::vector<int>& eps) {
  Matrix<T> v = u;
  for (std::size_t r = 0; r < u.rows(); ++r)
    for (std::size_t c = 0; c < u.cols(); ++c)
      if (eps[r] * eps[c] < 0) v(r, c) = -v(r, c);
  return v;
}

}  // namespace

template <class T>
std::optional<Certificate<T>> component_certificate(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c) {
  const std::size_t n = a.n();
  if (!is_transverse(a, b)) fail(ErrorCode::NotTransverse, "extremities are not transverse");
  if (!is_transverse(a, c) || !is_transverse(c, b)) fail(ErrorCode::NotTransverse, "point not transverse");
  const auto frame = normalize_pair(a, b, trivial_sign_class(n));
  const Matrix<T> u = unipotent_coordinate(frame.g, c);

  std::vector<int> eps(n, 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int s = Field<T>::sign(u(i, i + 1));
    if (s == 0) return std::nullopt;
    eps[i + 1] = eps[i] * s;
  }
  std::optional<std::pair<std::vector<int>, Side>> rep;
  for (auto cand : {std::pair{eps, Side::Plus}, std::pair{negated(eps), Side::Plus},
                    std::pair{alternated(eps), Side::Minus}, std::pair{negated(alternated(eps)), Side::Minus}})
    if (product(cand.first) == 1) {
      rep = cand;
      break;
    }
  if (!rep) return std::nullopt;

  Side side = rep->second;
  const SignClass sc = canonical_class(rep->first, side);
  Matrix<T> v = conjugate_by_signs(u, full_signs(sc));
  if (side == Side::Minus) v = inverse(v);
  if (!in_positive_semigroup(v)) return std::nullopt;
  return Certificate<T>{sc, side, min_positivity_minor(v)};
}

template <class T>
Diamond<T> make_diamond(const Flag<T>& a, const Flag<T>& b, const Flag<T>& witness) {
  auto cert = component_certificate(a, b, witness);
  if (!cert) fail(ErrorCode::NotInDiamond, "witness lies in no diamond over the extremities");
  return Diamond<T>{a, b, witness, *cert};
}

template <class T>
bool diamond_contains(const Diamond<T>& d, const Flag<T>& x) {
  if (!is_transverse(d.a, x) || !is_transverse(x, d.b)) return false;
  const auto cert = component_certificate(d.a, d.b, x);
  return cert && *cert == d.cert;
}

template <class T>
Diamond<T> opposite(const Diamond<T>& d) {
  const std::size_t n = d.a.n();
  const auto frame = normalize_pair(d.a, d.b, trivial_sign_class(n));
  const Matrix<T> u = unipotent_coordinate(frame.g, d.witness);
  const Matrix<T> w = inverse(frame.g) * inverse(u) * antistandard_flag<T>(n).basis;
  Diamond<T> out{d.a, d.b, make_flag(w), opposite_certificate(d.cert)};
  return out;
}

template <class T>
Flag<T> diamond_point(const Diamond<T>& d, const LusztigParams<T>& p) {
  const std::size_t n = d.a.n();
  const auto frame = normalize_pair(d.a, d.b, d.cert.sign_class);
  Matrix<T> u = psi(p);
  if (d.cert.side == Side::Minus) u = inverse(u);
  return make_flag(inverse(frame.g) * u * antistandard_flag<T>(n).basis);
}

template <class T>
Flag<T> sample_diamond(const Diamond<T>& d, Rng& rng) {
  return diamond_point(d, random_params<T>(d.a.n(), rng));
}

template <class T>
bool nesting_check(const Flag<T>& a, const Flag<T>& b, const Flag<T>& c, std::size_t samples, Rng& rng) {
  if (samples == 0) return true;
  const Diamond<T> vc = make_diamond(a, b, c);
  const Diamond<T> vcb = opposite(make_diamond(c, b, a));
  const Diamond<T> vac = opposite(make_diamond(a, c, b));
  for (std::size_t s = 0; s < samples; ++s) {
    const Flag<T> x = sample_diamond(vcb, rng);
    const Flag<T> y = sample_diamond(vac, rng);
    if (!diamond_contains(vc, x) || !diamond_contains(vc, y)) return false;
    if (diamond_contains(vac, x) || diamond_contains(vcb, y)) return false;
  }
  return true;
}

#define POSLAB_INSTANTIATE(T)                                                                         \
  template Matrix<T> elementary<T>(std::size_t, int, const T&);                                       \
  template Matrix<T> psi<T>(const LusztigParams<T>&);                                                 \
  template Matrix<T> psi_closed<T>(const LusztigParams<T>&);                                          \
  template LusztigParams<T> random_params<T>(std::size_t, Rng&, const Word&);                         \
  template bool is_upper_unipotent<T>(const Matrix<T>&);                                              \
  template T min_positivity_minor<T>(const Matrix<T>&);                                               \
  template bool in_positive_semigroup<T>(const Matrix<T>&);                                           \
  template LusztigParams<T> factorize<T>(const Matrix<T>&, const Word&);                              \
  template Certificate<T> opposite_certificate<T>(const Certificate<T>&);                             \
  template std::optional<Certificate<T>> component_certificate<T>(const Flag<T>&, const Flag<T>&,     \
                                                                  const Flag<T>&);                    \
  template Diamond<T> make_diamond<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&);                \
  template bool diamond_contains<T>(const Diamond<T>&, const Flag<T>&);                               \
  template Diamond<T> opposite<T>(const Diamond<T>&);                                                 \
  template Flag<T> diamond_point<T>(const Diamond<T>&, const LusztigParams<T>&);                      \
  template Flag<T> sample_diamond<T>(const Diamond<T>&, Rng&);                                        \
  template bool nesting_check<T>(const Flag<T>&, const Flag<T>&, const Flag<T>&, std::size_t, Rng&);

POSLAB_INSTANTIATE(Rational)
POSLAB_INSTANTIATE(double)
#undef POSLAB_INSTANTIATE

}  // namespace poslab
