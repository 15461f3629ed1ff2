#include "poslab/weyl.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace poslab {

Perm identity_perm(std::size_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Perm longest_perm(std::size_t n) {
  Perm p(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = static_cast<int>(n - 1 - j);
  return p;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm out(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) out[j] = a[b[j]];
  return out;
}

Perm inverse_perm(const Perm& p) {
  Perm out(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) out[p[j]] = static_cast<int>(j);
  return out;
}

int inversions(const Perm& p) {
  int c = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++c;
  return c;
}

CellLabel make_label(const Perm& p) { return CellLabel{p, inversions(p)}; }

Perm simple_reflection(std::size_t n, int i) {
  Perm p = identity_perm(n);
  std::swap(p[i], p[i + 1]);
  return p;
}

Perm from_word(std::size_t n, const std::vector<int>& word) {
  Perm p = identity_perm(n);
  for (int i : word) p = compose(p, simple_reflection(n, i));
  return p;
}

std::vector<int> reduced_word(const Perm& p) {
  // w = s_{i1}...s_{ik}; bubble-sort the one-line notation from the right
  Perm q = p;
  std::vector<int> letters;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < q.size(); ++i)
      if (q[i] > q[i + 1]) {
        std::swap(q[i], q[i + 1]);  // q <- q s_i
        letters.push_back(static_cast<int>(i));
        changed = true;
      }
  }
  std::reverse(letters.begin(), letters.end());
  return letters;
}

std::vector<Perm> all_permutations(std::size_t n) {
  std::vector<Perm> out;
  Perm p = identity_perm(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<Perm> involutions(std::size_t n) {
  std::vector<Perm> out;
  for (const Perm& p : all_permutations(n))
    if (compose(p, p) == identity_perm(n)) out.push_back(p);
  return out;
}

template <class T>
Matrix<T> permutation_matrix(const Perm& w) {
  Matrix<T> m(w.size(), w.size());
  for (std::size_t j = 0; j < w.size(); ++j) m(w[j], j) = T(1);
  return m;
}

template MatrixQ permutation_matrix<Rational>(const Perm&);
template MatrixD permutation_matrix<double>(const Perm&);

std::vector<std::vector<int>> rank_matrix(const Perm& w) {
  const std::size_t n = w.size();
  std::vector<std::vector<int>> r(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      int c = 0;
      for (std::size_t k = 0; k <= j; ++k)
        if (w[k] >= static_cast<int>(i)) ++c;
      r[i][j] = c;
    }
  return r;
}

CellLabel bruhat_cell(const MatrixQ& g) {
  const std::size_t n = g.rows();
  require(g.cols() == n && n >= 1, ErrorCode::InvalidArgument, "bruhat_cell expects a square matrix");
  // r(i,j) with padding r(n,.) = r(.,-1) = 0
  std::vector<std::vector<int>> r(n + 1, std::vector<int>(n + 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> rows;
    for (std::size_t k = i; k < n; ++k) rows.push_back(k);
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> cols(j + 1);
      std::iota(cols.begin(), cols.end(), 0);
      r[i][j + 1] = static_cast<int>(rank(g.submatrix(rows, cols)));
    }
  }
  Perm w(n, -1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][j + 1] - r[i + 1][j + 1] - r[i][j] + r[i + 1][j] == 1) w[j] = static_cast<int>(i);
  for (int v : w) require(v >= 0, ErrorCode::InvalidArgument, "matrix is singular");
  return make_label(w);
}

CellLabel bruhat_cell(const MatrixD&) {
  fail(ErrorCode::FloatModeUnsupported, "Bruhat cells require exact arithmetic");
}

bool bruhat_leq(const Perm& u, const Perm& w) {
  require(u.size() == w.size(), ErrorCode::InvalidArgument, "dimension mismatch");
  const auto ru = rank_matrix(u);
  const auto rw = rank_matrix(w);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j)
      if (ru[i][j] > rw[i][j]) return false;
  return true;
}

bool bruhat_leq(const CellLabel& u, const CellLabel& w) { return bruhat_leq(u.perm, w.perm); }

namespace {

// Proper standard parabolic subgroups all sit inside some stabilizer of {0..k-1}.
bool in_proper_parabolic(const Perm& p) {
  const std::size_t n = p.size();
  int prefix_max = -1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    prefix_max = std::max(prefix_max, p[k]);
    if (prefix_max == static_cast<int>(k)) return true;
  }
  return false;
}

}  // namespace

InvolutionReport check_involution_lemma(std::size_t n) {
  require(n >= 2 && n <= 7, ErrorCode::ConfigInvalid, "involution check supports 2 <= n <= 7");
  InvolutionReport rep;
  rep.n = n;
  const Perm w0 = longest_perm(n);
  const auto perms = all_permutations(n);
  for (const Perm& s : involutions(n)) {
    if (s == w0) continue;
    ++rep.checked;
    bool found = false;
    for (const Perm& pi : perms) {
      if (in_proper_parabolic(compose(compose(pi, s), inverse_perm(pi)))) {
        found = true;
        break;
      }
    }
    if (!found) {
      ++rep.failures;
      rep.failing.push_back(s);
    }
  }
  return rep;
}

TransversalityReport transversality_scan(const std::vector<MatrixQ>& generators, int depth) {
  if (generators.empty()) fail(ErrorCode::EmptyGeneratorSet, "no generators given");
  require(depth >= 1, ErrorCode::ConfigInvalid, "depth must be positive");
  const std::size_t n = generators.front().rows();
  std::vector<MatrixQ> letters;
  std::vector<int> names;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    require(generators[k].rows() == n && generators[k].cols() == n, ErrorCode::InvalidArgument,
            "generator dimension mismatch");
    letters.push_back(generators[k]);
    names.push_back(static_cast<int>(k) + 1);
    letters.push_back(inverse(generators[k]));
    names.push_back(-static_cast<int>(k) - 1);
  }

  TransversalityReport rep;
  const Perm w0 = longest_perm(n);
  std::vector<Perm> cells;
  // deduplicate products by their entries so repeated elements are counted once
  std::map<std::vector<std::string>, bool> seen;
  auto key = [](const MatrixQ& m) {
    std::vector<std::string> k;
    k.reserve(m.data().size());
    for (const auto& v : m.data()) k.push_back(v.get_str());
    return k;
  };

  std::vector<std::pair<MatrixQ, std::vector<int>>> frontier{{MatrixQ::identity(n), {}}};
  for (int len = 1; len <= depth; ++len) {
    std::vector<std::pair<MatrixQ, std::vector<int>>> next;
    for (const auto& [m, word] : frontier)
      for (std::size_t l = 0; l < letters.size(); ++l) {
        MatrixQ p = m * letters[l];
        std::vector<int> w = word;
        w.push_back(names[l]);
        if (!seen.emplace(key(p), true).second) continue;
        ++rep.samples_checked;
        const CellLabel c = bruhat_cell(p);
        if (c.perm == w0) {
          rep.witness = p;
          rep.witness_word = w;
          return rep;
        }
        if (std::find(cells.begin(), cells.end(), c.perm) == cells.end()) cells.push_back(c.perm);
        next.emplace_back(std::move(p), std::move(w));
      }
    frontier = std::move(next);
  }

  // (length, lex)-minimal upper bound of the observed cells
  std::optional<Perm> best;
  for (const Perm& s : all_permutations(n)) {
    bool dominates = true;
    for (const Perm& c : cells)
      if (!bruhat_leq(c, s)) {
        dominates = false;
        break;
      }
    if (!dominates) continue;
    if (!best || inversions(s) < inversions(*best)) best = s;
  }
  rep.dominating_cell = make_label(*best);
  return rep;
}

}  // namespace poslab
