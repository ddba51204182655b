#include "schubcalc/rootsys.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <deque>
#include <numeric>
#include <unordered_set>

namespace rootsys {

using schubcalc::UsageError;
using schubcalc::BudgetError;
using schubcalc::check_invariant;

TypeLabel parse_type(const std::string& s) {
  if (s.size() < 2) throw UsageError("bad type label '" + s + "'");
  TypeLabel t;
  t.series = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  std::size_t used = 0;
  try {
    t.rank = std::stoi(s.substr(1), &used);
  } catch (const std::exception&) {
    throw UsageError("bad type label '" + s + "'");
  }
  if (used != s.size() - 1) throw UsageError("bad type label '" + s + "'");
  return t;
}

namespace {

void validate(const TypeLabel& t) {
  int n = t.rank;
  bool ok = false;
  switch (t.series) {
    case 'A': ok = n >= 1; break;
    case 'B': ok = n >= 2; break;
    case 'C': ok = n >= 2; break;
    case 'D': ok = n >= 4; break;
    case 'E': ok = n >= 6 && n <= 8; break;
    case 'F': ok = n == 4; break;
    case 'G': ok = n == 2; break;
    default: ok = false;
  }
  // rank cap keeps coordinates and masks small
  if (n > 8) ok = false;
  if (!ok) throw UsageError("invalid series/rank combination " + t.str());
}

// A[i][j] = <alpha_j, alpha_i^vee>, Bourbaki labels
std::vector<std::vector<int>> cartan_matrix(const TypeLabel& t) {
  int n = t.rank;
  std::vector<std::vector<int>> A(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) A[i][i] = 2;
  auto link = [&](int i, int j, int aij = -1, int aji = -1) {
    A[i][j] = aij;
    A[j][i] = aji;
  };
  switch (t.series) {
    case 'A':
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'B':
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 2, n - 1, -1, -2);
      break;
    case 'C':
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 2, n - 1, -2, -1);
      break;
    case 'D':
      for (int i = 0; i + 2 < n; ++i) link(i, i + 1);
      link(n - 3, n - 1);
      break;
    case 'E':
      // 1-3-4-5-6-7-8 with 2 hanging off 4
      link(0, 2);
      link(2, 3);
      link(1, 3);
      for (int i = 3; i + 1 < n; ++i) link(i, i + 1);
      break;
    case 'F':
      link(0, 1);
      link(1, 2, -1, -2);
      link(2, 3);
      break;
    case 'G':
      link(0, 1, -3, -1);
      break;
  }
  return A;
}

int height_of(const Root& r) { return std::accumulate(r.begin(), r.end(), 0); }

}  // namespace

RootSystem::RootSystem(TypeLabel t) : type_(t) {
  validate(t);
  n_ = t.rank;
  A_ = cartan_matrix(t);

  auto refl_vec = [&](int i, const Root& v) {
    int c = 0;
    for (int j = 0; j < n_; ++j) c += A_[i][j] * v[j];
    Root w = v;
    w[i] -= c;
    return w;
  };

  // closure of the simple roots under simple reflections
  std::set<Root> all;
  std::vector<Root> frontier;
  for (int i = 0; i < n_; ++i) {
    Root e(n_, 0);
    e[i] = 1;
    all.insert(e);
    frontier.push_back(e);
  }
  while (!frontier.empty()) {
    std::vector<Root> next;
    for (auto& r : frontier)
      for (int i = 0; i < n_; ++i) {
        Root s = refl_vec(i, r);
        if (all.insert(s).second) next.push_back(s);
      }
    frontier.swap(next);
  }

  std::vector<Root> pos;
  for (auto& r : all)
    if (height_of(r) > 0) pos.push_back(r);
  std::sort(pos.begin(), pos.end(), [](const Root& a, const Root& b) {
    int ha = height_of(a), hb = height_of(b);
    if (ha != hb) return ha < hb;
    return a < b;
  });
  npos_ = static_cast<int>(pos.size());
  check_invariant(2 * pos.size() == all.size(), "roots not symmetric");
  roots_ = pos;
  for (auto& r : pos) {
    Root m = r;
    for (auto& x : m) x = -x;
    roots_.push_back(m);
  }
  for (int k = 0; k < num_roots(); ++k) {
    index_[roots_[k]] = k;
    // every root is positive or negative
    bool nonneg = std::all_of(roots_[k].begin(), roots_[k].end(), [](int x) { return x >= 0; });
    bool nonpos = std::all_of(roots_[k].begin(), roots_[k].end(), [](int x) { return x <= 0; });
    check_invariant(nonneg || nonpos, "mixed-sign root");
  }
  simple_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    Root e(n_, 0);
    e[i] = 1;
    simple_[i] = index_.at(e);
  }
  refl_.assign(n_, std::vector<int>(num_roots()));
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < num_roots(); ++k) refl_[i][k] = index_.at(refl_vec(i, roots_[k]));

  // squared lengths: (a_i,a_j) = A[i][j] len2[i] / 2 must be symmetric
  std::vector<mpq_class> L(n_, 0);
  std::vector<bool> known(n_, false);
  L[0] = 1;
  known[0] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (A_[i][j] != 0 && known[i] && !known[j]) {
          L[j] = mpq_class(A_[i][j]) * L[i] / A_[j][i];
          known[j] = true;
          changed = true;
        }
  }
  mpq_class mx = *std::max_element(L.begin(), L.end());
  len2_.resize(n_);
  for (int i = 0; i < n_; ++i) len2_[i] = L[i] * 2 / mx;
  gram_.assign(n_, std::vector<mpq_class>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) gram_[i][j] = mpq_class(A_[i][j]) * len2_[i] / 2;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) check_invariant(gram_[i][j] == gram_[j][i], "gram not symmetric");

  rho_.assign(n_, 0);
  for (int k = 0; k < npos_; ++k)
    for (int i = 0; i < n_; ++i) rho_[i] += roots_[k][i];
  for (auto& x : rho_) x /= 2;

  // w0: keep multiplying by right ascents
  WeylElt w = identity();
  for (bool grew = true; grew;) {
    grew = false;
    for (int i = 0; i < n_; ++i)
      if (!is_right_descent(w, i)) {
        w = mul(w, simple_reflection(i));
        grew = true;
        break;
      }
  }
  w0_ = w;
  check_invariant(w0_.length() == npos_, "longest element has wrong length");
}

int RootSystem::height(int r) const { return height_of(roots_[r]); }

int RootSystem::index_of(const Root& v) const {
  auto it = index_.find(v);
  return it == index_.end() ? -1 : it->second;
}

mpq_class RootSystem::ip(const QVec& a, const QVec& b) const {
  mpq_class s = 0;
  for (int i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n_; ++j)
      if (b[j] != 0) s += a[i] * gram_[i][j] * b[j];
  }
  return s;
}

mpq_class RootSystem::ip(const Root& a, const Root& b) const {
  mpq_class s = 0;
  for (int i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n_; ++j)
      if (b[j] != 0) s += a[i] * gram_[i][j] * b[j];
  }
  return s;
}

uint64_t RootSystem::weyl_order() const {
  auto fact = [](int k) {
    uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<uint64_t>(i);
    return f;
  };
  int n = n_;
  switch (type_.series) {
    case 'A': return fact(n + 1);
    case 'B':
    case 'C': return (uint64_t{1} << n) * fact(n);
    case 'D': return (uint64_t{1} << (n - 1)) * fact(n);
    case 'E': return n == 6 ? 51840ULL : n == 7 ? 2903040ULL : 696729600ULL;
    case 'F': return 1152;
    case 'G': return 12;
  }
  return 0;
}

WeylElt RootSystem::from_perm(std::vector<uint16_t> perm) const {
  WeylElt w;
  w.rs_ = this;
  int len = 0;
  for (int r = 0; r < npos_; ++r)
    if (perm[r] >= npos_) ++len;
  w.len_ = len;
  // greedy left descents on the inverse permutation
  int R = num_roots();
  std::vector<uint16_t> inv(R);
  for (int r = 0; r < R; ++r) inv[perm[r]] = static_cast<uint16_t>(r);
  std::vector<uint16_t> tmp(R);
  w.word_.reserve(len);
  for (int step = 0; step < len; ++step) {
    int i = 0;
    while (i < n_ && inv[simple_[i]] < npos_) ++i;
    check_invariant(i < n_, "descent search failed");
    w.word_.push_back(i);
    // (s_i w)^{-1} = w^{-1} s_i
    for (int r = 0; r < R; ++r) tmp[r] = inv[refl_[i][r]];
    inv.swap(tmp);
  }
  w.perm_ = std::move(perm);
  return w;
}

WeylElt RootSystem::identity() const {
  std::vector<uint16_t> p(num_roots());
  std::iota(p.begin(), p.end(), 0);
  return from_perm(std::move(p));
}

WeylElt RootSystem::from_word(const std::vector<int>& word0) const {
  std::vector<uint16_t> p(num_roots());
  std::iota(p.begin(), p.end(), 0);
  // w = s_{i1} ... s_{ik}: apply the rightmost letter first
  for (auto it = word0.rbegin(); it != word0.rend(); ++it) {
    int i = *it;
    if (i < 0 || i >= n_) throw UsageError("simple root index out of range");
    for (auto& x : p) x = static_cast<uint16_t>(refl_[i][x]);
  }
  return from_perm(std::move(p));
}

WeylElt RootSystem::from_word1(const std::vector<int>& word1) const {
  std::vector<int> w;
  for (int x : word1) {
    if (x < 1 || x > n_)
      throw UsageError("letter " + std::to_string(x) + " out of range for " + type_.str());
    w.push_back(x - 1);
  }
  return from_word(w);
}

WeylElt RootSystem::simple_reflection(int i) const { return from_word({i}); }

void RootSystem::check_same(const WeylElt& w) const {
  if (w.rs_ != this) throw UsageError("Weyl element belongs to a different root system");
}

WeylElt RootSystem::mul(const WeylElt& a, const WeylElt& b) const {
  check_same(a);
  check_same(b);
  std::vector<uint16_t> p(num_roots());
  for (int r = 0; r < num_roots(); ++r) p[r] = a.perm_[b.perm_[r]];
  return from_perm(std::move(p));
}

WeylElt RootSystem::inverse(const WeylElt& a) const {
  check_same(a);
  std::vector<uint16_t> p(num_roots());
  for (int r = 0; r < num_roots(); ++r) p[a.perm_[r]] = static_cast<uint16_t>(r);
  return from_perm(std::move(p));
}

bool RootSystem::is_left_descent(const WeylElt& w, int i) const {
  // l(s_i w) < l(w)  iff  w^{-1} alpha_i < 0
  int target = simple_[i];
  for (int r = 0; r < num_roots(); ++r)
    if (w.perm_[r] == target) return !is_positive(r);
  return false;
}

bool RootSystem::is_right_descent(const WeylElt& w, int i) const {
  return !is_positive(w.perm_[simple_[i]]);
}

std::vector<int> WeylElt::word1() const {
  std::vector<int> v;
  for (int x : word_) v.push_back(x + 1);
  return v;
}

std::string WeylElt::str() const {
  if (word_.empty()) return "e";
  std::string s;
  for (int x : word_) s += "s" + std::to_string(x + 1);
  return s;
}

std::size_t WeylHash::operator()(const WeylElt& w) const {
  std::size_t h = 1469598103934665603ULL;
  for (auto x : w.perm()) h = (h ^ x) * 1099511628211ULL;
  return h;
}

RootSystemPtr build_root_system(const TypeLabel& t) { return std::make_shared<const RootSystem>(t); }

RootSystemPtr build_root_system(const std::string& label) { return build_root_system(parse_type(label)); }

QVec to_qvec(const Root& r) {
  QVec q;
  for (int x : r) q.emplace_back(x);
  return q;
}

QVec weyl_act(const WeylElt& w, const QVec& v) {
  const RootSystem& rs = w.system();
  int n = rs.rank();
  QVec out(n, 0);
  for (int j = 0; j < n; ++j) {
    if (v[j] == 0) continue;
    const Root& img = rs.root(w(rs.simple(j)));
    for (int i = 0; i < n; ++i) out[i] += v[j] * img[i];
  }
  return out;
}

Root weyl_act(const WeylElt& w, const Root& v) {
  const RootSystem& rs = w.system();
  int n = rs.rank();
  Root out(n, 0);
  for (int j = 0; j < n; ++j) {
    if (v[j] == 0) continue;
    const Root& img = rs.root(w(rs.simple(j)));
    for (int i = 0; i < n; ++i) out[i] += v[j] * img[i];
  }
  return out;
}

std::vector<int> inversion_set(const WeylElt& w) {
  const RootSystem& rs = w.system();
  std::vector<int> out;
  for (int r = rs.num_positive(); r < rs.num_roots(); ++r)
    if (rs.is_positive(w(r))) out.push_back(r);
  return out;
}

RootMask inversion_mask(const WeylElt& w) {
  const RootSystem& rs = w.system();
  RootMask m;
  int N = rs.num_positive();
  for (int p = 0; p < N; ++p)
    if (rs.is_positive(w(p + N))) m.set(p);
  return m;
}

bool weak_leq(const WeylElt& u, const WeylElt& v) {
  u.system().check_same(v);
  RootMask a = inversion_mask(u), b = inversion_mask(v);
  return (a & ~b).none();
}

bool bruhat_leq(const WeylElt& u0, const WeylElt& v0) {
  const RootSystem& rs = u0.system();
  rs.check_same(v0);
  // lifting property: if s v < v then
  //   u <= v  <=>  (s u < u ? s u <= s v : u <= s v)
  WeylElt u = u0, v = v0;
  while (true) {
    if (u.length() > v.length()) return false;
    if (u.length() == v.length()) return u == v;
    if (u.length() == 0) return true;
    int s = v.word().front();
    WeylElt sv = rs.mul(rs.simple_reflection(s), v);
    if (rs.is_left_descent(u, s)) u = rs.mul(rs.simple_reflection(s), u);
    v = sv;
  }
}

std::vector<WeylElt> enumerate_weyl(const RootSystem& rs, const EnumOptions& opt) {
  uint64_t order = rs.weyl_order();
  if (!opt.allow) throw BudgetError("full Weyl group enumeration not enabled");
  if (order > opt.bound)
    throw BudgetError("|W| = " + std::to_string(order) + " exceeds enumeration bound " +
                      std::to_string(opt.bound));
  auto key = [&](const WeylElt& w) {
    std::string k;
    for (int i = 0; i < rs.rank(); ++i) {
      auto x = w(rs.simple(i));
      k.push_back(static_cast<char>(x & 0xff));
      k.push_back(static_cast<char>(x >> 8));
    }
    return k;
  };
  std::vector<WeylElt> out{rs.identity()};
  std::unordered_set<std::string> seen{key(out[0])};
  std::vector<WeylElt> level{out[0]};
  while (!level.empty()) {
    std::vector<WeylElt> next;
    for (auto& w : level)
      for (int i = 0; i < rs.rank(); ++i) {
        if (rs.is_right_descent(w, i)) continue;
        WeylElt x = rs.mul(w, rs.simple_reflection(i));
        if (seen.insert(key(x)).second) next.push_back(x);
      }
    for (auto& x : next) out.push_back(x);
    level.swap(next);
  }
  check_invariant(out.size() == order, "enumeration size disagrees with |W|");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rootsys
