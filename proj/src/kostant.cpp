#include "schubcalc/kostant.hpp"

#include <bit>

namespace kostant {

using schubcalc::BudgetError;
using schubcalc::UsageError;
using schubcalc::check_invariant;

Qi Qi::operator/(const Qi& o) const {
  mpq_class d = o.re * o.re + o.im * o.im;
  check_invariant(d != 0, "division by zero");
  return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
}

// ---------------------------------------------------------------- Chevalley

namespace {

rootsys::Root sub(const rootsys::Root& a, const rootsys::Root& b) {
  rootsys::Root c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

rootsys::Root add(const rootsys::Root& a, const rootsys::Root& b) {
  rootsys::Root c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

}  // namespace

Chevalley::Chevalley(rootsys::RootSystemPtr rs) : rs_(std::move(rs)), n_(rs_->rank()) {
  const auto& R = *rs_;
  int np = R.num_positive();
  Np_.assign(np, std::vector<mpq_class>(np));
  has_.assign(np, std::vector<bool>(np, false));
  auto pval = [&](int a, int b) {
    int p = 0;
    rootsys::Root x = R.root(b);
    while (true) {
      x = sub(x, R.root(a));
      if (R.index_of(x) < 0) return p;
      ++p;
    }
  };
  // positive roots are sorted by height, so smaller sums are filled first
  for (int xi = 0; xi < np; ++xi) {
    if (R.height(xi) == 1) continue;
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < np; ++a) {
      int b = R.index_of(sub(R.root(xi), R.root(a)));
      if (b >= 0 && R.is_positive(b) && a < b) pairs.emplace_back(a, b);
    }
    check_invariant(!pairs.empty(), "root without a decomposition");
    auto [a, b] = pairs[0];  // extraspecial pair, sign +
    Np_[a][b] = pval(a, b) + 1;
    Np_[b][a] = -Np_[a][b];
    has_[a][b] = has_[b][a] = true;
    mpq_class xx = R.ip(R.root(xi), R.root(xi));
    for (std::size_t k = 1; k < pairs.size(); ++k) {
      auto [g, d] = pairs[k];
      mpq_class t2 = 0, t3 = 0;
      int na = R.neg(a), nb = R.neg(b);
      int da = R.index_of(sub(R.root(d), R.root(a)));
      if (da >= 0) t2 = N(d, na) * N(g, nb) / R.ip(R.root(da), R.root(da));
      int ga = R.index_of(sub(R.root(g), R.root(a)));
      if (ga >= 0) t3 = N(na, g) * N(d, nb) / R.ip(R.root(ga), R.root(ga));
      mpq_class val = -(t2 + t3) * xx / (-Np_[a][b]);
      Np_[g][d] = val;
      Np_[d][g] = -val;
      has_[g][d] = has_[d][g] = true;
    }
  }
}

mpq_class Chevalley::Npos(int r, int s) const {
  check_invariant(has_[r][s], "structure constant not yet defined");
  return Np_[r][s];
}

mpq_class Chevalley::N(int r, int s) const {
  const auto& R = *rs_;
  int t = R.index_of(add(R.root(r), R.root(s)));
  if (t < 0) return 0;
  bool rp = R.is_positive(r), sp = R.is_positive(s);
  if (rp && sp) return Npos(r, s);
  if (!rp && !sp) return -Npos(R.neg(r), R.neg(s));
  // r + s + u = 0: N_{r,s}/(u,u) = N_{s,u}/(r,r) = N_{u,r}/(s,s)
  int u = R.neg(t);
  mpq_class uu = R.ip(R.root(u), R.root(u));
  if (R.is_positive(s) == R.is_positive(u)) return N(s, u) * uu / R.ip(R.root(r), R.root(r));
  return N(u, r) * uu / R.ip(R.root(s), R.root(s));
}

std::vector<std::pair<int, mpq_class>> Chevalley::bracket(int a, int b) const {
  const auto& R = *rs_;
  bool ah = a < n_, bh = b < n_;
  if (ah && bh) return {};
  if (bh) {
    auto v = bracket(b, a);
    for (auto& [k, c] : v) c = -c;
    return v;
  }
  if (ah) {
    const auto& r = R.root(b - n_);
    int c = 0;
    for (int j = 0; j < n_; ++j) c += R.cartan()[a][j] * r[j];
    if (c == 0) return {};
    return {{b, mpq_class(c)}};
  }
  int r = a - n_, s = b - n_;
  if (s == R.neg(r)) {
    // [e_r, e_{-r}] = h_r, coroot r^vee = sum r_i (a_i,a_i)/(r,r) a_i^vee
    const auto& x = R.root(r);
    mpq_class rr = R.ip(x, x);
    std::vector<std::pair<int, mpq_class>> out;
    for (int i = 0; i < n_; ++i)
      if (x[i] != 0) out.emplace_back(i, mpq_class(x[i]) * R.len2(i) / rr);
    return out;
  }
  int t = R.index_of(add(R.root(r), R.root(s)));
  if (t < 0) return {};
  return {{n_ + t, N(r, s)}};
}

mpq_class Chevalley::killing(int a, int b) const {
  mpq_class tr = 0;
  for (int c = 0; c < dim(); ++c)
    for (auto& [k, x] : bracket(b, c))
      for (auto& [k2, y] : bracket(a, k))
        if (k2 == c) tr += x * y;
  return tr;
}

// ---------------------------------------------------------------- operators

namespace {

void acc(ExtElt& v, Mono m, const Qi& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = v.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) v.erase(it);
  }
}

// sign of sorting the concatenation a.b of two disjoint monomials
int wedge_sign(Mono a, Mono b) {
  int inv = 0;
  for (Mono x = b; x; x &= x - 1) {
    int k = std::countr_zero(x);
    inv += std::popcount(static_cast<Mono>(a >> (k + 1)));
  }
  return inv % 2 ? -1 : 1;
}

Op from_columns(std::vector<ExtElt> cols) {
  Op o;
  o.D = cols.size();
  o.cols.resize(o.D);
  for (std::size_t j = 0; j < o.D; ++j)
    for (auto& [m, c] : cols[j]) o.cols[j].emplace_back(m, c);
  return o;
}

// dense linear algebra over Qi
using Mat = std::vector<std::vector<Qi>>;

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(Mat& A, int ncols) {
  std::vector<int> piv;
  std::size_t r = 0;
  for (int c = 0; c < ncols && r < A.size(); ++c) {
    std::size_t p = r;
    while (p < A.size() && A[p][c].is_zero()) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[r]);
    Qi inv = Qi(1) / A[r][c];
    for (auto& x : A[r]) x = x * inv;
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == r || A[i][c].is_zero()) continue;
      Qi f = A[i][c];
      for (std::size_t k = 0; k < A[i].size(); ++k) A[i][k] = A[i][k] - f * A[r][k];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

std::vector<std::vector<Qi>> nullspace(Mat A, int ncols) {
  auto piv = rref(A, ncols);
  std::vector<bool> is_piv(ncols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<Qi>> out;
  for (int f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    std::vector<Qi> v(ncols, Qi(0));
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -A[r][f];
    out.push_back(v);
  }
  return out;
}

Mat inverse(const Mat& A) {
  std::size_t n = A.size();
  Mat M(n, std::vector<Qi>(2 * n, Qi(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) M[i][j] = A[i][j];
    M[i][n + i] = 1;
  }
  auto piv = rref(M, static_cast<int>(n));
  check_invariant(piv.size() == n, "singular matrix");
  Mat out(n, std::vector<Qi>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = M[i][n + j];
  return out;
}

Mat matmul(const Mat& A, const Mat& B) {
  std::size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
  Mat C(n, std::vector<Qi>(m, Qi(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (A[i][t].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
    }
  return C;
}

Mat conj_transpose(const Mat& A) {
  std::size_t n = A.size(), m = A.empty() ? 0 : A[0].size();
  Mat T(m, std::vector<Qi>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) T[j][i] = A[i][j].conj();
  return T;
}

Qi det(Mat A) {
  std::size_t n = A.size();
  Qi d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && A[p][c].is_zero()) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(A[p], A[c]);
      d = -d;
    }
    d = d * A[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (A[r][c].is_zero()) continue;
      Qi f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] = A[r][k] - f * A[c][k];
    }
  }
  return d;
}

}  // namespace

ExtElt Op::apply(const ExtElt& x) const {
  ExtElt y;
  for (auto& [m, c] : x)
    for (auto& [r, v] : cols[m]) acc(y, r, c * v);
  return y;
}

bool Op::is_zero() const {
  for (auto& c : cols)
    if (!c.empty()) return false;
  return true;
}

Op compose(const Op& a, const Op& b) {
  std::vector<ExtElt> cols(b.D);
  for (std::size_t j = 0; j < b.D; ++j) {
    ExtElt x;
    for (auto& [m, c] : b.cols[j]) acc(x, m, c);
    cols[j] = a.apply(x);
  }
  return from_columns(std::move(cols));
}

Op add(const Op& a, const Op& b) {
  std::vector<ExtElt> cols(a.D);
  for (std::size_t j = 0; j < a.D; ++j) {
    for (auto& [m, c] : a.cols[j]) acc(cols[j], m, c);
    for (auto& [m, c] : b.cols[j]) acc(cols[j], m, c);
  }
  return from_columns(std::move(cols));
}

Op scale(const Op& a, const Qi& s) {
  Op o = a;
  for (auto& col : o.cols) {
    for (auto& [m, c] : col) c = c * s;
    if (s.is_zero()) col.clear();
  }
  return o;
}

bool op_equal(const Op& a, const Op& b) { return add(a, scale(b, -1)).is_zero(); }

bool index_leq(const Index& a, const Index& b) { return parabolic::z_leq(a.z, b.z) && a.deg <= b.deg; }
bool index_less(const Index& a, const Index& b) { return index_leq(a, b) && !(a == b); }

// ---------------------------------------------------------------- context

KostantContext::KostantContext(ContextPtr ctx, Options opt)
    : ctx_(std::move(ctx)), opt_(opt), lie_(ctx_->rs_ptr()) {
  const auto& R = ctx_->rs();
  std::vector<int> U;
  for (int r = 0; r < R.num_positive(); ++r)
    if (!ctx_->is_levi_root(r)) U.push_back(r);
  nu_ = static_cast<int>(U.size());
  if (nu_ > opt_.max_u)
    throw BudgetError("|Phi(u)| = " + std::to_string(nu_) + " exceeds the Kostant budget " +
                      std::to_string(opt_.max_u));
  m_ = 2 * nu_;
  for (int r : U) rb_.push_back(R.neg(r));
  for (int r : U) rb_.push_back(r);
  for (int k = 0; k < m_; ++k) ridx_[rb_[k]] = k;
  for (int k = 0; k < m_; ++k) kappa_.push_back(lie_.killing(lie_.e(rb_[k]), lie_.e(R.neg(rb_[k]))));
  for (auto& x : kappa_) check_invariant(x > 0, "kappa(e_a, e_-a) not positive");

  std::size_t D = this->D();
  gdiag_.resize(D);
  for (Mono x = 0; x < D; ++x) {
    mpq_class g = 1;
    for (int k = 0; k < m_; ++k)
      if (x >> k & 1) g /= kappa_[k];
    gdiag_[x] = g;
  }

  // b(phi^k) = - sum_{i<j} c_ij^k phi^i phi^j, truncated bracket
  std::vector<ExtElt> bimg(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = i + 1; j < m_; ++j) {
      if ((i < nu_) != (j < nu_)) continue;
      int t = R.index_of(add(R.root(rb_[i]), R.root(rb_[j])));
      if (t < 0) continue;
      auto it = ridx_.find(t);
      check_invariant(it != ridx_.end(), "u bracket left u");
      acc(bimg[it->second], (Mono{1} << i) | (Mono{1} << j), Qi(-lie_.N(rb_[i], rb_[j])));
    }
  b_ = derivation(bimg, true);
  b10_ = split(b_, 1, 0);
  b01_ = split(b_, 0, 1);

  // Hermitian adjoint for the diagonal metric: G^{-1} b^dagger G
  std::vector<ExtElt> dcols(D);
  for (Mono j = 0; j < D; ++j)
    for (auto& [i, c] : b_.cols[j]) acc(dcols[i], j, c.conj() * gdiag_[i] / gdiag_[j]);
  dstar_ = from_columns(std::move(dcols));
  dm10_ = split(dstar_, -1, 0);
  dm01_ = split(dstar_, 0, -1);

  L_ = add(compose(dstar_, b_), compose(b_, dstar_));
  Lhalf_ = scale(add(compose(dm01_, b01_), compose(b01_, dm01_)), Qi(mpq_class(1, 2)));

  // E = 2 sum pi(g) pi(f), f = e_{-gamma}, g = e_gamma / kappa(e_{-gamma}, e_gamma)
  E_.D = D;
  E_.cols.assign(D, {});
  for (int k = 0; k < nu_; ++k)
    E_ = add(E_, scale(compose(coadjoint_trunc(nu_ + k), coadjoint_trunc(k)), Qi(mpq_class(2) / kappa_[k])));

  int n = R.rank();
  for (int i = 0; i < n; ++i) levi_ops_.push_back(coadjoint_full(lie_.h(i)));
  for (int r = 0; r < R.num_roots(); ++r) {
    if (!ctx_->is_levi_root(r)) continue;
    levi_ops_.push_back(coadjoint_full(lie_.e(r)));
  }

  build_L0();
  R_ = scale(compose(L0_, E_), -1);
}

Op KostantContext::derivation(const std::vector<ExtElt>& gen_img, bool odd) const {
  std::size_t D = this->D();
  std::vector<ExtElt> cols(D);
  for (Mono x = 0; x < D; ++x) {
    int s = 0;
    for (int k = 0; k < m_; ++k) {
      if (!(x >> k & 1)) continue;
      int sign = (odd && s % 2) ? -1 : 1;
      ++s;
      Mono before = x & ((Mono{1} << k) - 1);
      Mono after = x & ~((Mono{2} << k) - 1);
      for (auto& [img, c] : gen_img[k]) {
        if (img & (before | after)) continue;
        int sg = sign * wedge_sign(before, img) * wedge_sign(before | img, after);
        acc(cols[x], before | img | after, sg == 1 ? c : -c);
      }
    }
  }
  return from_columns(std::move(cols));
}

Op KostantContext::coadjoint_trunc(int kx) const {
  // pi(x) phi^k = - sum_j phi^k([x, e_j]_r) phi^j
  const auto& R = ctx_->rs();
  std::vector<ExtElt> img(m_);
  for (int j = 0; j < m_; ++j) {
    if ((kx < nu_) != (j < nu_)) continue;
    int t = R.index_of(add(R.root(rb_[kx]), R.root(rb_[j])));
    if (t < 0) continue;
    acc(img[ridx_.at(t)], Mono{1} << j, Qi(-lie_.N(rb_[kx], rb_[j])));
  }
  return derivation(img, false);
}

Op KostantContext::coadjoint_full(int g) const {
  std::vector<ExtElt> img(m_);
  for (int j = 0; j < m_; ++j)
    for (auto& [k, c] : lie_.bracket(g, lie_.e(rb_[j]))) {
      int r = k - ctx_->rs().rank();
      check_invariant(r >= 0 && ridx_.count(r), "Levi action left r");
      acc(img[ridx_.at(r)], Mono{1} << j, Qi(-c));
    }
  return derivation(img, false);
}

int KostantContext::p_of(Mono x) const { return std::popcount(x & ((Mono{1} << nu_) - 1)); }
int KostantContext::q_of(Mono x) const { return std::popcount(x >> nu_); }

Op KostantContext::split(const Op& a, int dp, int dq) const {
  Op o;
  o.D = a.D;
  o.cols.resize(a.D);
  for (Mono j = 0; j < a.D; ++j)
    for (auto& [i, c] : a.cols[j])
      if (p_of(i) - p_of(j) == dp && q_of(i) - q_of(j) == dq) o.cols[j].emplace_back(i, c);
  return o;
}

rootsys::Root KostantContext::t_weight(Mono x) const {
  const auto& R = ctx_->rs();
  rootsys::Root w(R.rank(), 0);
  for (int k = 0; k < m_; ++k)
    if (x >> k & 1)
      for (int i = 0; i < R.rank(); ++i) w[i] -= R.root(rb_[k])[i];
  return w;
}

Index KostantContext::index_of(Mono x) const {
  const auto& R = ctx_->rs();
  Index ix{parabolic::z_zero(*ctx_), -p_of(x)};
  for (int k = 0; k < nu_; ++k)
    if (x >> k & 1) ix.z = parabolic::z_add(ix.z, ctx_->restrict(R.root(R.neg(rb_[k]))));
  return ix;
}

void KostantContext::build_L0() {
  std::size_t D = this->D();
  // blocks: (T-weight of the u^- part, T-weight of the u part, p, q)
  Mono lowmask = (Mono{1} << nu_) - 1;
  std::map<std::pair<rootsys::Root, rootsys::Root>, std::vector<Mono>> blocks;
  for (Mono x = 0; x < D; ++x) blocks[{t_weight(x & lowmask), t_weight(x & ~lowmask)}].push_back(x);
  std::vector<ExtElt> cols(D);
  for (auto& [key, ms] : blocks) {
    // p and q are fixed by the two weights up to coincidences; split them too
    std::map<std::pair<int, int>, std::vector<Mono>> sub;
    for (Mono x : ms) sub[{p_of(x), q_of(x)}].push_back(x);
    for (auto& [pq, idx] : sub) {
      std::size_t k = idx.size();
      std::map<Mono, std::size_t> pos;
      for (std::size_t a = 0; a < k; ++a) pos[idx[a]] = a;
      Mat Lb(k, std::vector<Qi>(k, Qi(0)));
      for (std::size_t a = 0; a < k; ++a)
        for (auto& [r, c] : L_.cols[idx[a]]) {
          auto it = pos.find(r);
          check_invariant(it != pos.end(), "L leaves its weight block");
          Lb[it->second][a] += c;
        }
      auto ker = nullspace(Lb, static_cast<int>(k));
      if (ker.size() == k) continue;
      // image basis: pivot columns of Lb
      Mat tmp = Lb;
      auto piv = rref(tmp, static_cast<int>(k));
      std::size_t r = piv.size();
      Mat Im(k, std::vector<Qi>(r));
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = 0; c < r; ++c) Im[a][c] = Lb[a][piv[c]];
      Mat G(k, std::vector<Qi>(k, Qi(0)));
      for (std::size_t a = 0; a < k; ++a) G[a][a] = gdiag_[idx[a]];
      // L restricted to Im: A = (Im^* G Im)^{-1} Im^* G L Im
      Mat ImH = conj_transpose(Im);
      Mat A = matmul(inverse(matmul(matmul(ImH, G), Im)), matmul(matmul(matmul(ImH, G), Lb), Im));
      Mat Ainv = inverse(A);
      // coordinates along ker + Im
      Mat K(k, std::vector<Qi>(k));
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t c = 0; c < ker.size(); ++c) K[a][c] = ker[c][a];
        for (std::size_t c = 0; c < r; ++c) K[a][ker.size() + c] = Im[a][c];
      }
      Mat Kinv = inverse(K);
      Mat imrows(Kinv.begin() + ker.size(), Kinv.end());
      Mat L0b = matmul(Im, matmul(Ainv, imrows));
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t c = 0; c < k; ++c)
          if (!L0b[a][c].is_zero()) acc(cols[idx[c]], idx[a], L0b[a][c]);
    }
  }
  L0_ = from_columns(std::move(cols));
}

bool KostantContext::levi_invariant(const ExtElt& x) const {
  for (auto& op : levi_ops_)
    if (!op.apply(x).empty()) return false;
  return true;
}

const std::map<Index, std::vector<ExtElt>>& KostantContext::C() const {
  if (c_done_) return C_;
  std::size_t D = this->D();
  rootsys::Root zero(ctx_->rs().rank(), 0);
  std::map<Index, std::vector<Mono>> pieces;
  for (Mono x = 0; x < D; ++x)
    if (t_weight(x) == zero) pieces[index_of(x)].push_back(x);
  for (auto& [ix, ms] : pieces) {
    std::map<std::pair<std::size_t, Mono>, std::size_t> rowpos;
    Mat A;
    // stack every Levi root operator, restricted to this piece
    for (std::size_t o = 0; o < levi_ops_.size(); ++o) {
      for (std::size_t c = 0; c < ms.size(); ++c)
        for (auto& [r, v] : levi_ops_[o].cols[ms[c]]) {
          auto key = std::make_pair(o, r);
          auto it = rowpos.find(key);
          if (it == rowpos.end()) {
            it = rowpos.emplace(key, A.size()).first;
            A.emplace_back(ms.size(), Qi(0));
          }
          A[it->second][c] += v;
        }
    }
    auto ker = nullspace(A, static_cast<int>(ms.size()));
    for (auto& v : ker) {
      ExtElt e;
      for (std::size_t c = 0; c < ms.size(); ++c) acc(e, ms[c], v[c]);
      C_[ix].push_back(e);
    }
  }
  c_done_ = true;
  return C_;
}

std::vector<ExtElt> KostantContext::closure(const ExtElt& start, const std::vector<const Op*>& ops) const {
  // echelon basis keyed by leading (largest) monomial
  std::map<Mono, ExtElt> ech;
  std::vector<ExtElt> basis, queue{start};
  auto reduce = [&](ExtElt y) {
    while (!y.empty()) {
      auto lead = y.rbegin()->first;
      auto it = ech.find(lead);
      if (it == ech.end()) break;
      Qi f = y.rbegin()->second / it->second.at(lead);
      for (auto& [m, c] : it->second) acc(y, m, -(f * c));
    }
    return y;
  };
  while (!queue.empty()) {
    ExtElt v = queue.back();
    queue.pop_back();
    ExtElt r = reduce(v);
    if (r.empty()) continue;
    ech[r.rbegin()->first] = r;
    basis.push_back(v);
    if (basis.size() > opt_.max_module)
      throw BudgetError("Levi-module closure exceeds " + std::to_string(opt_.max_module) + " vectors");
    for (auto* op : ops) queue.push_back(op->apply(v));
  }
  return basis;
}

ExtElt KostantContext::h(const WeylElt& w) const {
  ctx_->require_WP(w, "w");
  const auto& R = ctx_->rs();
  Mono phi = 0, psi = 0;
  for (int a = 0; a < R.num_positive(); ++a) {
    if (R.is_positive(w(a))) continue;
    int k = ridx_.at(R.neg(a));   // covector dual to e_{-a}
    phi |= Mono{1} << k;
    psi |= Mono{1} << ridx_.at(a);
  }
  // phi_w is extremal, not always highest, so close under the whole Levi
  std::vector<const Op*> ops;
  for (auto& o : levi_ops_) ops.push_back(&o);
  auto M = closure(ExtElt{{phi, Qi(1)}}, ops);
  auto Nn = closure(ExtElt{{psi, Qi(1)}}, ops);
  check_invariant(M.size() == Nn.size(), "M_w and its dual differ in dimension");
  std::size_t d = M.size();
  // <phi_S, psi_T> = delta * prod 1/kappa
  Mat P(d, std::vector<Qi>(d, Qi(0)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (auto& [s, c] : M[i]) {
        auto it = Nn[j].find(s << nu_);
        if (it == Nn[j].end()) continue;
        Qi pr = c * it->second;
        for (int k = 0; k < nu_; ++k)
          if (s >> k & 1) pr = pr / Qi(kappa_[k]);
        P[i][j] += pr;
      }
  Mat X = inverse(P);
  ExtElt out;
  for (std::size_t l = 0; l < d; ++l)
    for (std::size_t j = 0; j < d; ++j) {
      if (X[j][l].is_zero()) continue;
      for (auto& [a, ca] : M[l])
        for (auto& [b, cb] : Nn[j]) acc(out, a | b, ca * cb * X[j][l]);
    }
  return out;
}

ExtElt KostantContext::s(const WeylElt& w) const {
  ExtElt total = h(w), t = total;
  for (int k = 0; !t.empty(); ++k) {
    check_invariant(k <= m_ + 1, "R series does not terminate");
    t = R_.apply(t);
    for (auto& [m, c] : t) acc(total, m, c);
  }
  return total;
}

Index KostantContext::expected_index(const WeylElt& w) const {
  auto z = parabolic::rho_weight(*ctx_, w);
  for (auto& x : z) x = -x;
  return {z, -w.length()};
}

Op KostantContext::transported_boundary() const {
  // boundary on wedge r: d(x_1..x_p) = sum_{a<b} (-1)^{a+b+1} [x_a,x_b] x_1..^a..^b..x_p
  const auto& R = ctx_->rs();
  std::size_t D = this->D();
  std::vector<ExtElt> dcols(D);
  for (Mono x = 0; x < D; ++x) {
    std::vector<int> bits;
    for (int k = 0; k < m_; ++k)
      if (x >> k & 1) bits.push_back(k);
    for (std::size_t a = 0; a < bits.size(); ++a)
      for (std::size_t b = a + 1; b < bits.size(); ++b) {
        int i = bits[a], j = bits[b];
        if ((i < nu_) != (j < nu_)) continue;
        int t = R.index_of(add(R.root(rb_[i]), R.root(rb_[j])));
        if (t < 0) continue;
        int k = ridx_.at(t);
        Mono rest = x & ~(Mono{1} << i) & ~(Mono{1} << j);
        if (rest >> k & 1) continue;
        int sg = ((a + b + 1) % 2 ? -1 : 1) * wedge_sign(Mono{1} << k, rest);
        acc(dcols[x], rest | (Mono{1} << k), Qi(sg * lie_.N(rb_[i], rb_[j])));
      }
  }
  Op Dm = from_columns(std::move(dcols));
  // T: e_a -> kappa_a phi^{-a}, extended multiplicatively
  std::vector<ExtElt> tcols(D), ticols(D);
  for (Mono x = 0; x < D; ++x) {
    Mono img = 0;
    Qi c = 1;
    int sg = 1;
    for (int k = 0; k < m_; ++k) {
      if (!(x >> k & 1)) continue;
      Mono bit = Mono{1} << ridx_.at(R.neg(rb_[k]));
      sg *= wedge_sign(img, bit);
      img |= bit;
      c = c * Qi(kappa_[k]);
    }
    Qi v = sg == 1 ? c : -c;
    acc(tcols[x], img, v);
    acc(ticols[img], x, Qi(1) / v);
  }
  Op T = from_columns(std::move(tcols)), Ti = from_columns(std::move(ticols));
  return compose(T, compose(Dm, Ti));
}

std::vector<std::vector<Qi>> KostantContext::hermitian_gram() const {
  const auto& R = ctx_->rs();
  Mat H(m_, std::vector<Qi>(m_));
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b)
      // -kappa(e_a, (e_b)^*) with e_b^* = -e_{-b}
      H[a][b] = Qi(lie_.killing(lie_.e(rb_[a]), lie_.e(R.neg(rb_[b]))));
  return H;
}

Qi KostantContext::inner(const ExtElt& x, const ExtElt& y) const {
  // form on r* dual to the form on r
  if (hs_.empty()) {
    Mat Hi = inverse(hermitian_gram());
    hs_.assign(m_, std::vector<Qi>(m_));
    for (int a = 0; a < m_; ++a)
      for (int b = 0; b < m_; ++b) hs_[a][b] = Hi[b][a];
  }
  const Mat& Hs = hs_;
  Qi tot = 0;
  for (auto& [s, cs] : x)
    for (auto& [t, ct] : y) {
      if (std::popcount(s) != std::popcount(t)) continue;
      std::vector<int> S, T;
      for (int k = 0; k < m_; ++k) {
        if (s >> k & 1) S.push_back(k);
        if (t >> k & 1) T.push_back(k);
      }
      Mat sub(S.size(), std::vector<Qi>(T.size()));
      for (std::size_t i = 0; i < S.size(); ++i)
        for (std::size_t j = 0; j < T.size(); ++j) sub[i][j] = Hs[S[i]][T[j]];
      tot += cs * ct.conj() * det(sub);
    }
  return tot;
}

// ---------------------------------------------------------------- checks

CheckResult run_checks(const KostantContext& K) {
  CheckResult res;
  std::size_t D = K.D();
  res.b_squared_zero = compose(K.b(), K.b()).is_zero();
  res.dstar_squared_zero = compose(K.dstar(), K.dstar()).is_zero();
  res.dstar_is_transport = op_equal(K.transported_boundary(), K.dstar());

  // G L is Hermitian, G diagonal with entries prod 1/kappa
  {
    auto g = [&](Mono x) {
      mpq_class v = 1;
      for (int k = 0; k < K.m(); ++k)
        if (x >> k & 1) v /= K.kappa(k);
      return Qi(v);
    };
    std::map<std::pair<Mono, Mono>, Qi> ent;
    for (Mono j = 0; j < D; ++j)
      for (auto& [i, c] : K.L().cols[j]) ent[{i, j}] = c;
    bool ok = true;
    for (auto& [ij, c] : ent) {
      auto it = ent.find({ij.second, ij.first});
      Qi other = it == ent.end() ? Qi(0) : it->second;
      if (g(ij.first) * c != (g(ij.second) * other).conj()) ok = false;
    }
    res.L_hermitian = ok;
  }

  const auto& C = K.C();
  for (auto& [ix, vs] : C) res.dimC += vs.size();

  // L against the half-sum formula on the u part
  res.L_matches_half_everywhere = op_equal(K.L(), K.L_half());
  {
    bool eq = true, ratio_ok = true;
    std::optional<Qi> ratio;
    for (auto& [ix, vs] : C)
      for (auto& v : vs) {
        auto a = K.L().apply(v), b = K.L_half().apply(v);
        if (a != b) eq = false;
        if (a.empty() && b.empty()) continue;
        if (a.empty() || b.empty()) {
          ratio_ok = false;
          continue;
        }
        Qi c = a.begin()->second / b.begin()->second;
        if (ratio && *ratio != c) ratio_ok = false;
        ratio = c;
        ExtElt scaled;
        for (auto& [m, x] : b) scaled[m] = x * c;
        if (scaled != a) ratio_ok = false;
      }
    res.L_matches_half_on_C = eq;
    if (ratio_ok && ratio) res.half_ratio_on_C = ratio->im == 0 ? ratio->re.get_str() : "complex";
    else res.half_ratio_on_C = ratio_ok ? "L vanishes on C" : "none";
  }

  // the form on r is diagonal with the kappa values, and pieces of C are orthogonal
  {
    auto H = K.hermitian_gram();
    bool ok = true;
    for (int a = 0; a < K.m(); ++a)
      for (int b = 0; b < K.m(); ++b)
        if (H[a][b] != (a == b ? Qi(K.kappa(a)) : Qi(0))) ok = false;
    std::vector<std::pair<Index, const ExtElt*>> all;
    for (auto& [ix, vs] : C)
      for (auto& v : vs) all.emplace_back(ix, &v);
    for (std::size_t i = 0; i < all.size() && ok; ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j)
        if (!(all[i].first == all[j].first) && !K.inner(*all[i].second, *all[j].second).is_zero()) {
          ok = false;
          break;
        }
    res.pieces_orthogonal = ok;
  }

  auto support_ok = [&](const ExtElt& x, auto pred) {
    for (auto& [m, c] : x)
      if (!pred(K.index_of(m))) return false;
    return true;
  };
  rootsys::Root zero(K.ctx().rs().rank(), 0);
  auto weight0 = [&](const ExtElt& x) {
    for (auto& [m, c] : x)
      if (K.t_weight(m) != zero) return false;
    return true;
  };

  // L keeps each piece, R moves it strictly down
  res.L_keeps_pieces = res.R_drops_weight = true;
  for (auto& [ix, vs] : C)
    for (auto& v : vs) {
      auto Lv = K.L().apply(v);
      if (!K.levi_invariant(Lv) || !weight0(Lv) || !support_ok(Lv, [&](const Index& j) { return j == ix; }))
        res.L_keeps_pieces = false;
      auto Rv = K.R().apply(v);
      if (!K.levi_invariant(Rv) || !support_ok(Rv, [&](const Index& j) { return index_less(j, ix); }))
        res.R_drops_weight = false;
    }

  // nilpotency of R on the whole algebra
  {
    Op P = K.R();
    for (int k = 1; k <= 2 * K.m() + 2; ++k) {
      if (P.is_zero()) {
        res.R_nilpotency = k;
        break;
      }
      P = compose(P, K.R());
    }
  }

  res.sw_levi_invariant = res.hw_grading = res.sw_filtration = res.sw_closed = true;
  for (auto& w : K.ctx().reps()) {
    auto hw = K.h(w);
    auto target = K.expected_index(w);
    if (!K.levi_invariant(hw) || !support_ok(hw, [&](const Index& j) { return j == target; })) res.hw_grading = false;
    auto sw = K.s(w);
    if (!K.levi_invariant(sw)) res.sw_levi_invariant = false;
    if (!support_ok(sw, [&](const Index& j) { return index_leq(j, target); })) res.sw_filtration = false;
    if (!K.b().apply(sw).empty()) res.sw_closed = false;
  }
  return res;
}

std::vector<FormTerm> form_terms(const KostantContext& K, const ExtElt& x) {
  const auto& R = K.ctx().rs();
  std::vector<FormTerm> out;
  for (auto& [m, c] : x) {
    FormTerm t;
    for (int k = 0; k < K.m(); ++k) {
      if (!(m >> k & 1)) continue;
      (k < K.nu() ? t.negative_part : t.positive_part).push_back(R.root(K.root_of(k)));
    }
    t.coeff = c;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace kostant
