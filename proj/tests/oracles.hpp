#pragma once
// Independent reference computations used only by the tests.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <set>
#include <vector>

#include "schubcalc/rootsys.hpp"

namespace oracle {

inline mpq_class det(std::vector<std::vector<mpq_class>> M) {
  int n = static_cast<int>(M.size());
  mpq_class d = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && M[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(M[p], M[c]);
      d = -d;
    }
    d *= M[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (M[r][c] == 0) continue;
      mpq_class f = M[r][c] / M[c][c];
      for (int k = c; k < n; ++k) M[r][k] -= f * M[c][k];
    }
  }
  return d;
}

// |W| as the size of the W-orbit of rho (rho is regular), computed on vectors
inline std::size_t orbit_size_of_rho(const rootsys::RootSystem& rs) {
  int n = rs.rank();
  auto refl = [&](int i, const rootsys::QVec& v) {
    mpq_class c = 0;
    for (int j = 0; j < n; ++j) c += rs.cartan()[i][j] * v[j];
    auto w = v;
    w[i] -= c;
    return w;
  };
  std::set<rootsys::QVec> seen{rs.rho()};
  std::vector<rootsys::QVec> fr{rs.rho()};
  while (!fr.empty()) {
    std::vector<rootsys::QVec> nx;
    for (auto& v : fr)
      for (int i = 0; i < n; ++i) {
        auto w = refl(i, v);
        if (seen.insert(w).second) nx.push_back(w);
      }
    fr.swap(nx);
  }
  return seen.size();
}

// root permutations of all subwords of a reduced word of v
inline std::set<std::vector<uint16_t>> subword_elements(const rootsys::RootSystem& rs,
                                                        const rootsys::WeylElt& v) {
  const auto& word = v.word();
  std::set<std::vector<uint16_t>> out;
  std::size_t k = word.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<int> sub;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) sub.push_back(word[i]);
    out.insert(rs.from_word(sub).perm());
  }
  return out;
}

}  // namespace oracle

namespace oracle {

// every reduced word of w (small groups only)
inline void reduced_words(const rootsys::RootSystem& rs, const rootsys::WeylElt& w,
                          std::vector<int>& suffix, std::vector<std::vector<int>>& out) {
  if (w.length() == 0) {
    out.emplace_back(suffix.rbegin(), suffix.rend());
    return;
  }
  for (int i = 0; i < rs.rank(); ++i)
    if (rs.is_right_descent(w, i)) {
      suffix.push_back(i);
      reduced_words(rs, rs.mul(w, rs.simple_reflection(i)), suffix, out);
      suffix.pop_back();
    }
}

}  // namespace oracle

#include <functional>
#include <unordered_map>

namespace oracle {

// Multiplication in H^*(G/B) rebuilt from the Chevalley formula alone.
// Basis P_w indexed by codimension l(w):
//   P_{s_i} P_w = sum_{beta>0, l(w s_beta) = l(w)+1} <omega_i, beta^vee> P_{w s_beta}
class MonkRing {
 public:
  using Vec = std::map<int, mpq_class>;

  explicit MonkRing(const rootsys::RootSystem& rs) : rs_(rs) {
    W_ = rootsys::enumerate_weyl(rs, {true, 5000});
    for (std::size_t k = 0; k < W_.size(); ++k) idx_[W_[k].perm()] = static_cast<int>(k);
    int n = rs.rank();
    // reflections s_beta = x s_j x^{-1} with x alpha_j = beta
    std::vector<rootsys::WeylElt> refl(rs.num_positive());
    std::vector<bool> got(rs.num_positive(), false);
    for (auto& x : W_)
      for (int j = 0; j < n; ++j) {
        int b = x(rs.simple(j));
        if (rs.is_positive(b) && !got[b]) {
          refl[b] = rs.mul(rs.mul(x, rs.simple_reflection(j)), rs.inverse(x));
          got[b] = true;
        }
      }
    M_.assign(n, std::vector<Vec>(W_.size()));
    for (int i = 0; i < n; ++i)
      for (std::size_t w = 0; w < W_.size(); ++w)
        for (int b = 0; b < rs.num_positive(); ++b) {
          auto ws = rs.mul(W_[w], refl[b]);
          if (ws.length() != W_[w].length() + 1) continue;
          const auto& beta = rs.root(b);
          rootsys::QVec bq = rootsys::to_qvec(beta);
          mpq_class c = mpq_class(beta[i]) * rs.len2(i) / rs.ip(bq, bq);
          if (c != 0) M_[i][w][idx_.at(ws.perm())] += c;
        }
    build_expressions();
  }

  int index(const rootsys::WeylElt& w) const { return idx_.at(w.perm()); }
  const rootsys::WeylElt& elt(int k) const { return W_[k]; }
  std::size_t size() const { return W_.size(); }

  // P_u * P_v
  Vec product(int u, int v) {
    auto key = std::make_pair(u, v);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Vec out;
    if (W_[u].length() == 0) {
      out[v] = 1;
    } else {
      for (auto& [coef, i, wp] : expr_[u]) {
        Vec inner = product(wp, v);
        for (auto& [x, cx] : inner)
          for (auto& [y, cy] : M_[i][x]) out[y] += coef * cx * cy;
      }
      for (auto it2 = out.begin(); it2 != out.end();) it2 = it2->second == 0 ? out.erase(it2) : std::next(it2);
    }
    memo_[key] = out;
    return out;
  }

 private:
  void build_expressions() {
    int n = rs_.rank();
    expr_.assign(W_.size(), {});
    int maxlen = rs_.num_positive();
    for (int k = 1; k <= maxlen; ++k) {
      std::vector<int> rows;
      for (std::size_t w = 0; w < W_.size(); ++w)
        if (W_[w].length() == k) rows.push_back(static_cast<int>(w));
      std::map<int, int> rpos;
      for (std::size_t r = 0; r < rows.size(); ++r) rpos[rows[r]] = static_cast<int>(r);
      // candidate products P_{s_i} P_{w'}
      std::vector<std::pair<int, int>> cols;
      for (std::size_t w = 0; w < W_.size(); ++w)
        if (W_[w].length() == k - 1)
          for (int i = 0; i < n; ++i) cols.emplace_back(i, static_cast<int>(w));
      std::size_t R = rows.size(), C = cols.size();
      // augmented [A | I] to solve A a = e_u for every u at once
      std::vector<std::vector<mpq_class>> A(R, std::vector<mpq_class>(C + R));
      for (std::size_t c = 0; c < C; ++c)
        for (auto& [y, cy] : M_[cols[c].first][cols[c].second]) A[rpos.at(y)][c] = cy;
      for (std::size_t r = 0; r < R; ++r) A[r][C + r] = 1;
      std::vector<int> pivcol;
      std::size_t prow = 0;
      for (std::size_t c = 0; c < C && prow < R; ++c) {
        std::size_t p = prow;
        while (p < R && A[p][c] == 0) ++p;
        if (p == R) continue;
        std::swap(A[p], A[prow]);
        mpq_class inv = 1 / A[prow][c];
        for (auto& x : A[prow]) x *= inv;
        for (std::size_t r = 0; r < R; ++r) {
          if (r == prow || A[r][c] == 0) continue;
          mpq_class f = A[r][c];
          for (std::size_t k2 = 0; k2 < C + R; ++k2) A[r][k2] -= f * A[prow][k2];
        }
        pivcol.push_back(static_cast<int>(c));
        ++prow;
      }
      if (prow != R) throw std::runtime_error("divisor classes do not generate");
      for (std::size_t u = 0; u < R; ++u)
        for (std::size_t r = 0; r < R; ++r) {
          const mpq_class& a = A[r][C + u];
          if (a != 0) expr_[rows[u]].emplace_back(a, cols[pivcol[r]].first, cols[pivcol[r]].second);
        }
    }
  }

  const rootsys::RootSystem& rs_;
  std::vector<rootsys::WeylElt> W_;
  std::map<std::vector<uint16_t>, int> idx_;
  std::vector<std::vector<Vec>> M_;
  std::vector<std::vector<std::tuple<mpq_class, int, int>>> expr_;
  std::map<std::pair<int, int>, Vec> memo_;
};

}  // namespace oracle
