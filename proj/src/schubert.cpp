#include "schubcalc/schubert.hpp"

#include <algorithm>

namespace schubert {

using schubcalc::BudgetError;
using schubcalc::UsageError;
using schubcalc::check_invariant;

using Mono = CoinvariantPoly::Mono;

CoinvariantPoly CoinvariantPoly::constant(int nvars, const mpq_class& c) {
  CoinvariantPoly p(nvars);
  p.add_term(0, c);
  return p;
}

CoinvariantPoly CoinvariantPoly::variable(int nvars, int i) {
  CoinvariantPoly p(nvars);
  p.add_term(Mono{1} << (8 * i), 1);
  return p;
}

CoinvariantPoly CoinvariantPoly::linear(int nvars, const std::vector<int>& coeffs) {
  CoinvariantPoly p(nvars);
  for (int i = 0; i < nvars; ++i)
    if (coeffs[i] != 0) p.add_term(Mono{1} << (8 * i), coeffs[i]);
  return p;
}

Mono CoinvariantPoly::pack(const std::vector<int>& e) {
  Mono m = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    check_invariant(e[i] >= 0 && e[i] < 256, "exponent out of range");
    m |= Mono(e[i]) << (8 * i);
  }
  return m;
}

static int mono_degree(Mono m) {
  int d = 0;
  while (m) {
    d += static_cast<int>(m & 0xff);
    m >>= 8;
  }
  return d;
}

int CoinvariantPoly::degree() const {
  if (t_.empty()) return -1;
  int d = mono_degree(t_.begin()->first);
  for (auto& [m, c] : t_)
    if (mono_degree(m) != d) return -2;
  return d;
}

mpq_class CoinvariantPoly::constant_term() const {
  auto it = t_.find(0);
  return it == t_.end() ? mpq_class(0) : it->second;
}

mpq_class CoinvariantPoly::coeff(const std::vector<int>& exps) const {
  auto it = t_.find(pack(exps));
  return it == t_.end() ? mpq_class(0) : it->second;
}

void CoinvariantPoly::add_term(Mono m, const mpq_class& c) {
  if (c == 0) return;
  auto [it, fresh] = t_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) t_.erase(it);
  }
}

CoinvariantPoly CoinvariantPoly::operator+(const CoinvariantPoly& o) const {
  CoinvariantPoly r = *this;
  if (r.n_ == 0) r.n_ = o.n_;
  for (auto& [m, c] : o.t_) r.add_term(m, c);
  return r;
}

CoinvariantPoly CoinvariantPoly::operator-(const CoinvariantPoly& o) const {
  CoinvariantPoly r = *this;
  if (r.n_ == 0) r.n_ = o.n_;
  for (auto& [m, c] : o.t_) r.add_term(m, -c);
  return r;
}

CoinvariantPoly CoinvariantPoly::operator*(const CoinvariantPoly& o) const {
  CoinvariantPoly r(std::max(n_, o.n_));
  for (auto& [a, ca] : t_)
    for (auto& [b, cb] : o.t_) r.add_term(a + b, ca * cb);
  return r;
}

CoinvariantPoly CoinvariantPoly::scaled(const mpq_class& c) const {
  CoinvariantPoly r(n_);
  if (c == 0) return r;
  for (auto& [m, x] : t_) r.t_.emplace(m, x * c);
  return r;
}

CoinvariantPoly reflect(const rootsys::RootSystem& rs, int i, const CoinvariantPoly& f) {
  int n = rs.rank();
  const auto& A = rs.cartan();
  CoinvariantPoly out(n);
  // binomial rows, reused
  std::vector<std::vector<mpz_class>> binom(1, std::vector<mpz_class>{1});
  auto row = [&](int k) -> const std::vector<mpz_class>& {
    while (static_cast<int>(binom.size()) <= k) {
      auto& p = binom.back();
      std::vector<mpz_class> q(p.size() + 1);
      q[0] = 1;
      q.back() = 1;
      for (std::size_t j = 1; j + 1 < q.size(); ++j) q[j] = p[j - 1] + p[j];
      binom.push_back(q);
    }
    return binom[k];
  };
  for (auto& [m, c] : f.terms()) {
    // image of the monomial: (-x_i)^{e_i} prod_{j != i} (x_j - A_ij x_i)^{e_j}
    std::vector<std::pair<Mono, mpq_class>> acc{{Mono{0}, c}};
    int ei = CoinvariantPoly::exp_of(m, i);
    if (ei % 2) acc[0].second = -acc[0].second;
    acc[0].first = Mono(ei) << (8 * i);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      int ej = CoinvariantPoly::exp_of(m, j);
      if (ej == 0) continue;
      if (A[i][j] == 0) {
        for (auto& [mm, cc] : acc) mm += Mono(ej) << (8 * j);
        continue;
      }
      // (x_j + a x_i)^{ej}, a = -A_ij
      mpz_class a = -A[i][j];
      const auto& br = row(ej);
      std::vector<std::pair<Mono, mpq_class>> nxt;
      nxt.reserve(acc.size() * (ej + 1));
      mpz_class apow = 1;
      for (int k = 0; k <= ej; ++k) {
        // k factors of a x_i, ej-k of x_j
        mpq_class coef(br[k] * apow);
        Mono add = (Mono(ej - k) << (8 * j)) + (Mono(k) << (8 * i));
        for (auto& [mm, cc] : acc) nxt.emplace_back(mm + add, cc * coef);
        apow *= a;
      }
      acc.swap(nxt);
    }
    for (auto& [mm, cc] : acc) out.add_term(mm, cc);
  }
  return out;
}

CoinvariantPoly divided_difference(const rootsys::RootSystem& rs, int i, const CoinvariantPoly& f) {
  CoinvariantPoly num = f - reflect(rs, i, f);
  CoinvariantPoly out(rs.rank());
  Mono xi = Mono{1} << (8 * i);
  for (auto& [m, c] : num.terms()) {
    check_invariant(CoinvariantPoly::exp_of(m, i) > 0, "divided difference numerator not divisible");
    out.add_term(m - xi, c);
  }
  return out;
}

SchubertEngine::SchubertEngine(rootsys::RootSystemPtr rs, Budget b) : rs_(std::move(rs)), budget_(b) {
  if (rs_->weyl_order() > budget_.max_weyl)
    throw BudgetError("|W| = " + std::to_string(rs_->weyl_order()) + " exceeds the cup-table budget " +
                      std::to_string(budget_.max_weyl));
}

CoinvariantPoly SchubertEngine::top_locked() {
  auto it = cache_.find(rs_->w0());
  if (it != cache_.end()) return it->second;
  int n = rs_->rank();
  CoinvariantPoly p = CoinvariantPoly::constant(n, 1);
  for (int r = 0; r < rs_->num_positive(); ++r) p = p * CoinvariantPoly::linear(n, rs_->root(r));
  p = p.scaled(mpq_class(1) / mpq_class(mpz_class(std::to_string(rs_->weyl_order()))));
  cache_.emplace(rs_->w0(), p);
  return p;
}

CoinvariantPoly SchubertEngine::polynomial(const WeylElt& w) {
  rs_->check_same(w);
  std::lock_guard<std::mutex> lk(mu_);
  auto it = cache_.find(w);
  if (it != cache_.end()) return it->second;
  // climb to w0 by right ascents, then come back down: S_{w} = d_i S_{w s_i}
  std::vector<std::pair<WeylElt, int>> chain;
  WeylElt x = w;
  while (true) {
    if (cache_.count(x)) break;
    if (x == rs_->w0()) {
      top_locked();
      break;
    }
    int i = 0;
    while (rs_->is_right_descent(x, i)) ++i;
    chain.emplace_back(x, i);
    x = rs_->mul(x, rs_->simple_reflection(i));
  }
  CoinvariantPoly p = cache_.at(x);
  for (auto c = chain.rbegin(); c != chain.rend(); ++c) {
    p = divided_difference(*rs_, c->second, p);
    cache_.emplace(c->first, p);
  }
  return p;
}

mpq_class SchubertEngine::coefficient_by_word(const CoinvariantPoly& f, const std::vector<int>& word0) {
  // d_y = d_{i1} o ... o d_{ik}: rightmost letter first
  CoinvariantPoly g = f;
  for (auto it = word0.rbegin(); it != word0.rend(); ++it) {
    g = divided_difference(*rs_, *it, g);
    if (g.is_zero()) return 0;
  }
  check_invariant(g.degree() <= 0, "extraction left a non-constant");
  return g.constant_term();
}

mpq_class SchubertEngine::coefficient(const CoinvariantPoly& f, const WeylElt& y) {
  return coefficient_by_word(f, y.word());
}

std::vector<mpq_class> SchubertEngine::coefficients(const CoinvariantPoly& f, const std::vector<WeylElt>& ys) {
  // D[y] = d_j D[y'] with y = s_j y'; canonical words share suffixes
  std::map<std::vector<int>, CoinvariantPoly> memo;
  memo.emplace(std::vector<int>{}, f);
  std::vector<mpq_class> out;
  for (auto& y : ys) {
    const auto& w = y.word();
    // find the longest memoised suffix
    std::size_t k = 0;
    while (!memo.count(std::vector<int>(w.begin() + k, w.end()))) ++k;
    for (std::size_t j = k; j-- > 0;) {
      std::vector<int> suf(w.begin() + j, w.end());
      std::vector<int> rest(w.begin() + j + 1, w.end());
      memo.emplace(suf, divided_difference(*rs_, w[j], memo.at(rest)));
    }
    const auto& g = memo.at(w);
    check_invariant(g.degree() <= 0, "extraction left a non-constant");
    out.push_back(g.constant_term());
  }
  return out;
}

std::shared_ptr<SchubertEngine> engine_for(const rootsys::RootSystemPtr& rs, Budget b) {
  static std::mutex mu;
  static std::map<const rootsys::RootSystem*, std::pair<rootsys::RootSystemPtr, std::shared_ptr<SchubertEngine>>> reg;
  if (rs->weyl_order() > b.max_weyl)
    throw BudgetError("|W| = " + std::to_string(rs->weyl_order()) + " exceeds the cup-table budget " +
                      std::to_string(b.max_weyl));
  std::lock_guard<std::mutex> lk(mu);
  auto it = reg.find(rs.get());
  if (it != reg.end()) return it->second.second;
  auto e = std::make_shared<SchubertEngine>(rs, b);
  reg.emplace(rs.get(), std::make_pair(rs, e));
  return e;
}

CoinvariantPoly schubert_polynomial(const rootsys::RootSystemPtr& rs, const WeylElt& w, Budget b) {
  return engine_for(rs, b)->polynomial(w);
}

mpq_class CohClass::at(const WeylElt& w) const {
  auto it = coeffs.find(w);
  return it == coeffs.end() ? mpq_class(0) : it->second;
}

void CohClass::add(const WeylElt& w, const mpq_class& c) {
  if (c == 0) return;
  auto [it, fresh] = coeffs.try_emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) coeffs.erase(it);
  }
}

CohClass single(const parabolic::ContextPtr& ctx, const WeylElt& w) {
  ctx->require_WP(w, "w");
  CohClass c{ctx, {}};
  c.add(w, 1);
  return c;
}

CohClass cup_constants(const parabolic::ContextPtr& ctx, const WeylElt& u, const WeylElt& v, Budget b) {
  ctx->require_WP(u, "u");
  ctx->require_WP(v, "v");
  auto eng = engine_for(ctx->rs_ptr(), b);
  int n = ctx->n_dim();
  CohClass out{ctx, {}};
  // codim(w) = codim(u) + codim(v)
  int lw = u.length() + v.length() - n;
  if (lw < 0) return out;
  auto f = eng->polynomial(parabolic::poincare_dual(*ctx, u)) *
           eng->polynomial(parabolic::poincare_dual(*ctx, v));
  const auto& cands = ctx->reps_of_length(lw);
  std::vector<WeylElt> duals;
  for (auto& w : cands) duals.push_back(parabolic::poincare_dual(*ctx, w));
  auto cs = eng->coefficients(f, duals);
  for (std::size_t k = 0; k < cands.size(); ++k) {
    check_invariant(cs[k] >= 0 && cs[k].get_den() == 1, "cup constant not a nonnegative integer");
    out.add(cands[k], cs[k]);
  }
  return out;
}

mpq_class triple_constant(const parabolic::ContextPtr& ctx, const WeylElt& u, const WeylElt& v,
                          const WeylElt& w, Budget b) {
  ctx->require_WP(u, "u");
  ctx->require_WP(v, "v");
  ctx->require_WP(w, "w");
  int n = ctx->n_dim();
  if ((n - u.length()) + (n - v.length()) + (n - w.length()) != n) return 0;
  auto eng = engine_for(ctx->rs_ptr(), b);
  auto f = eng->polynomial(parabolic::poincare_dual(*ctx, u)) *
           eng->polynomial(parabolic::poincare_dual(*ctx, v)) *
           eng->polynomial(parabolic::poincare_dual(*ctx, w));
  // sigma_e corresponds to the polynomial of e^vee = w0 w0^P
  return eng->coefficient(f, ctx->top());
}

std::vector<TableEntry> cup_table(const parabolic::ContextPtr& ctx, Budget b) {
  std::vector<TableEntry> out;
  const auto& reps = ctx->reps();
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = 0; j < reps.size(); ++j) {
      auto cls = cup_constants(ctx, reps[i], reps[j], b);
      for (auto& [w, c] : cls.coeffs) out.push_back({reps[i], reps[j], w, c});
    }
  return out;
}

}  // namespace schubert
