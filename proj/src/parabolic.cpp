#include "schubcalc/parabolic.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace parabolic {

using schubcalc::BudgetError;
using schubcalc::UsageError;
using schubcalc::check_invariant;

std::string to_string(Cmp c) {
  switch (c) {
    case Cmp::less: return "less";
    case Cmp::greater: return "greater";
    case Cmp::equal: return "equal";
    case Cmp::incomparable: return "incomparable";
  }
  return "?";
}

std::vector<int> parse_index_list(const std::string& s) {
  std::vector<int> out;
  std::string tok;
  std::stringstream ss(s);
  while (std::getline(ss, tok, ',')) {
    tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
    if (tok.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("bad index '" + tok + "'");
    }
    if (used != tok.size()) throw UsageError("bad index '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

ParabolicContext::ParabolicContext(rootsys::RootSystemPtr rs, std::vector<int> levi0)
    : rs_(std::move(rs)), levi_(std::move(levi0)) {
  int n = rs_->rank();
  std::sort(levi_.begin(), levi_.end());
  levi_.erase(std::unique(levi_.begin(), levi_.end()), levi_.end());
  in_levi_.assign(n, false);
  for (int i : levi_) {
    if (i < 0 || i >= n) throw UsageError("Levi index out of range");
    in_levi_[i] = true;
  }
  for (int i = 0; i < n; ++i)
    if (!in_levi_[i]) zidx_.push_back(i);

  // longest element of W_P: grow by ascents among Levi reflections
  WeylElt w = rs_->identity();
  for (bool grew = true; grew;) {
    grew = false;
    for (int i : levi_)
      if (!rs_->is_right_descent(w, i)) {
        w = rs_->mul(w, rs_->simple_reflection(i));
        grew = true;
        break;
      }
  }
  wP0_ = w;
  top_ = rs_->mul(rs_->w0(), wP0_);

  int nlevi = 0;
  for (int r = 0; r < rs_->num_positive(); ++r)
    if (is_levi_root(r)) ++nlevi;
  n_dim_ = rs_->num_positive() - nlevi;
  check_invariant(wP0_.length() == nlevi, "w0^P length mismatch");
  check_invariant(top_.length() == n_dim_, "w0 w0^P length mismatch");

  // Z-weights of g/p = restrictions of negative non-Levi roots
  for (int r = rs_->num_positive(); r < rs_->num_roots(); ++r) {
    if (is_levi_root(r)) continue;
    auto z = restrict(rs_->root(r));
    // weights of g/p sit in -C: all coordinates <= 0, not all zero
    bool neg = std::all_of(z.begin(), z.end(), [](const mpq_class& x) { return x <= 0; });
    check_invariant(neg && z != z_zero(*this), "g/p weight outside -C");
    comp_[z] += 1;
  }
  int mass = 0;
  for (auto& [k, m] : comp_) mass += m;
  check_invariant(mass == n_dim_, "sum dim V_i != dim G/P");

  // rho(G/P) = -2 rho|_Z, and also the weighted sum over gd(G/P)
  QVec m2;
  for (auto& x : rs_->rho()) m2.push_back(-2 * x);
  rho_gp_ = restrict(m2);
  ZWeight via_gd = z_zero(*this);
  for (auto& [k, m] : comp_)
    for (std::size_t i = 0; i < k.size(); ++i) via_gd[i] += m * k[i];
  check_invariant(via_gd == rho_gp_, "rho(G/P) disagrees with the gd(G/P) sum");
}

const std::vector<WeylElt>& ParabolicContext::reps(uint64_t bound) const {
  std::lock_guard<std::mutex> lk(reps_mu_);
  if (!reps_done_) {
    reps_ = minimal_coset_reps(*this, bound);
    by_len_.assign(n_dim_ + 1, {});
    for (auto& w : reps_) by_len_[w.length()].push_back(w);
    reps_done_ = true;
  }
  return reps_;
}

const std::vector<WeylElt>& ParabolicContext::reps_of_length(int l) const {
  reps();
  static const std::vector<WeylElt> none;
  if (l < 0 || l > n_dim_) return none;
  return by_len_[l];
}

std::vector<int> ParabolicContext::levi1() const {
  std::vector<int> v;
  for (int i : levi_) v.push_back(i + 1);
  return v;
}

bool ParabolicContext::is_levi_root(int r) const {
  const auto& x = rs_->root(r);
  for (int i = 0; i < rs_->rank(); ++i)
    if (!in_levi_[i] && x[i] != 0) return false;
  return true;
}

ZWeight ParabolicContext::restrict(const QVec& v) const {
  ZWeight z;
  for (int i : zidx_) z.push_back(v[i]);
  return z;
}

ZWeight ParabolicContext::restrict(const rootsys::Root& v) const {
  ZWeight z;
  for (int i : zidx_) z.emplace_back(v[i]);
  return z;
}

bool ParabolicContext::in_WP(const WeylElt& w) const {
  rs_->check_same(w);
  for (int i : levi_)
    if (!rs_->is_positive(w(rs_->simple(i)))) return false;
  return true;
}

void ParabolicContext::require_WP(const WeylElt& w, const char* what) const {
  if (!in_WP(w)) throw UsageError(std::string(what) + " = " + w.str() + " is not in W^P");
}

ContextPtr make_context(rootsys::RootSystemPtr rs, const std::vector<int>& levi1) {
  std::vector<int> l0;
  for (int i : levi1) {
    if (i < 1 || i > rs->rank()) throw UsageError("Levi index " + std::to_string(i) + " out of range");
    l0.push_back(i - 1);
  }
  return std::make_shared<const ParabolicContext>(std::move(rs), std::move(l0));
}

std::vector<WeylElt> minimal_coset_reps(const ParabolicContext& ctx, uint64_t bound) {
  const auto& rs = ctx.rs();
  // W^P is closed under removing left letters; BFS by left multiplication
  std::vector<WeylElt> out{rs.identity()};
  std::unordered_set<WeylElt, rootsys::WeylHash> seen{out[0]};
  std::vector<WeylElt> level{out[0]};
  while (!level.empty()) {
    std::vector<WeylElt> next;
    for (auto& w : level)
      for (int i = 0; i < rs.rank(); ++i) {
        if (rs.is_left_descent(w, i)) continue;
        WeylElt x = rs.mul(rs.simple_reflection(i), w);
        if (!ctx.in_WP(x)) continue;
        if (seen.insert(x).second) {
          next.push_back(x);
          if (seen.size() > bound)
            throw BudgetError("|W^P| exceeds enumeration bound " + std::to_string(bound));
        }
      }
    for (auto& x : next) out.push_back(x);
    level.swap(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

WeylElt poincare_dual(const ParabolicContext& ctx, const WeylElt& v) {
  ctx.require_WP(v, "v");
  const auto& rs = ctx.rs();
  WeylElt d = rs.mul(rs.mul(rs.w0(), v), ctx.wP0());
  check_invariant(ctx.in_WP(d), "dual left W^P");
  return d;
}

Cmp z_compare(const ZWeight& a, const ZWeight& b) {
  if (a.size() != b.size()) throw UsageError("Z-weights of different rank");
  bool le = true, ge = true;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] < a[i]) le = false;
    if (b[i] > a[i]) ge = false;
  }
  if (le && ge) return Cmp::equal;
  if (le) return Cmp::less;
  if (ge) return Cmp::greater;
  return Cmp::incomparable;
}

ZWeight z_add(const ZWeight& a, const ZWeight& b) {
  ZWeight c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

ZWeight z_sub(const ZWeight& a, const ZWeight& b) {
  ZWeight c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

ZWeight z_zero(const ParabolicContext& ctx) { return ZWeight(ctx.z_rank(), mpq_class(0)); }

GdVector gd_vector(const ParabolicContext& ctx, const WeylElt& w) {
  ctx.require_WP(w, "w");
  GdVector g;
  for (int r : rootsys::inversion_set(w)) g[ctx.restrict(ctx.rs().root(r))] += 1;
  return g;
}

GdVector gd_add(const GdVector& a, const GdVector& b) {
  GdVector c = a;
  for (auto& [k, m] : b) c[k] += m;
  for (auto it = c.begin(); it != c.end();) it = it->second == 0 ? c.erase(it) : std::next(it);
  return c;
}

int gd_mass(const GdVector& g) {
  int s = 0;
  for (auto& [k, m] : g) s += m;
  return s;
}

ZWeight rho_weight(const ParabolicContext& ctx, const WeylElt& w) {
  ctx.require_WP(w, "w");
  const auto& rs = ctx.rs();
  QVec x = rootsys::weyl_act(rs.inverse(w), rs.rho());
  for (int i = 0; i < rs.rank(); ++i) x[i] -= rs.rho()[i];
  return ctx.restrict(x);
}

std::vector<int> stabilizer_simple_roots(const ParabolicContext& ctx, const WeylElt& w) {
  ctx.require_WP(w, "w");
  const auto& rs = ctx.rs();
  WeylElt winv = rs.inverse(w);
  std::vector<int> out;
  for (int i = 0; i < rs.rank(); ++i) {
    bool descent = rs.is_left_descent(w, i);
    // s_i w in w W_P  <=>  w^{-1} alpha_i is a Levi root
    bool levi = ctx.is_levi_root(winv(rs.simple(i)));
    if (descent || levi) out.push_back(i);
  }
  return out;
}

std::string zweight_str(const ZWeight& z) {
  std::string s = "(";
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) s += ",";
    s += z[i].get_str();
  }
  return s + ")";
}

}  // namespace parabolic
