#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "schubcalc/parabolic.hpp"

namespace schubert {

using rootsys::WeylElt;
using parabolic::ParabolicContext;

// Polynomial in the simple roots x_1..x_n. Exponents are packed 8 bits per
// variable, so degree < 256 and rank <= 8.
class CoinvariantPoly {
 public:
  using Mono = uint64_t;
  CoinvariantPoly() = default;
  explicit CoinvariantPoly(int nvars) : n_(nvars) {}
  static CoinvariantPoly constant(int nvars, const mpq_class& c);
  static CoinvariantPoly variable(int nvars, int i);
  static CoinvariantPoly linear(int nvars, const std::vector<int>& coeffs);

  int nvars() const { return n_; }
  const std::map<Mono, mpq_class>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  // -1 for the zero polynomial, -2 if not homogeneous
  int degree() const;
  mpq_class constant_term() const;
  mpq_class coeff(const std::vector<int>& exps) const;

  static int exp_of(Mono m, int i) { return static_cast<int>((m >> (8 * i)) & 0xff); }
  static Mono pack(const std::vector<int>& e);

  void add_term(Mono m, const mpq_class& c);
  CoinvariantPoly operator+(const CoinvariantPoly& o) const;
  CoinvariantPoly operator-(const CoinvariantPoly& o) const;
  CoinvariantPoly operator*(const CoinvariantPoly& o) const;
  CoinvariantPoly scaled(const mpq_class& c) const;
  bool operator==(const CoinvariantPoly& o) const { return n_ == o.n_ && t_ == o.t_; }

 private:
  int n_ = 0;
  std::map<Mono, mpq_class> t_;
};

// s_i f, with s_i(x_j) = x_j - A[i][j] x_i
CoinvariantPoly reflect(const rootsys::RootSystem& rs, int i, const CoinvariantPoly& f);
// (f - s_i f) / x_i
CoinvariantPoly divided_difference(const rootsys::RootSystem& rs, int i, const CoinvariantPoly& f);

struct Budget {
  uint64_t max_weyl = 1152;  // largest |W| for which Schubert polynomials are built
};

// Per-root-system cache of Schubert polynomials. Thread safe.
class SchubertEngine {
 public:
  SchubertEngine(rootsys::RootSystemPtr rs, Budget b);
  const rootsys::RootSystem& rs() const { return *rs_; }

  // deg = l(w); (d_v S_w)(0) = delta for l(v) = l(w)
  CoinvariantPoly polynomial(const WeylElt& w);
  // coefficient of S_y in f, f homogeneous of degree l(y); optional explicit word of y
  mpq_class coefficient(const CoinvariantPoly& f, const WeylElt& y);
  mpq_class coefficient_by_word(const CoinvariantPoly& f, const std::vector<int>& word0);
  // coefficients of S_y for every y in ys, sharing prefixes
  std::vector<mpq_class> coefficients(const CoinvariantPoly& f, const std::vector<WeylElt>& ys);

 private:
  CoinvariantPoly top_locked();
  rootsys::RootSystemPtr rs_;
  Budget budget_;
  std::mutex mu_;
  std::unordered_map<WeylElt, CoinvariantPoly, rootsys::WeylHash> cache_;
};

std::shared_ptr<SchubertEngine> engine_for(const rootsys::RootSystemPtr& rs, Budget b = {});

CoinvariantPoly schubert_polynomial(const rootsys::RootSystemPtr& rs, const WeylElt& w, Budget b = {});

// Element of H^*(G/P) in the Schubert basis sigma_w = [X_w], w in W^P
struct CohClass {
  parabolic::ContextPtr ctx;
  std::map<WeylElt, mpq_class> coeffs;

  bool is_zero() const { return coeffs.empty(); }
  mpq_class at(const WeylElt& w) const;
  void add(const WeylElt& w, const mpq_class& c);
  bool operator==(const CohClass& o) const { return coeffs == o.coeffs; }
  bool operator!=(const CohClass& o) const { return !(*this == o); }
};

CohClass single(const parabolic::ContextPtr& ctx, const WeylElt& w);

// sigma_u . sigma_v = sum c_{uv}^w sigma_w
CohClass cup_constants(const parabolic::ContextPtr& ctx, const WeylElt& u, const WeylElt& v,
                       Budget b = {});
// coefficient of sigma_e in sigma_u sigma_v sigma_w
mpq_class triple_constant(const parabolic::ContextPtr& ctx, const WeylElt& u, const WeylElt& v,
                          const WeylElt& w, Budget b = {});

// full multiplication table over W^P x W^P, nonzero entries only
struct TableEntry {
  WeylElt u, v, w;
  mpq_class coeff;
};
std::vector<TableEntry> cup_table(const parabolic::ContextPtr& ctx, Budget b = {});

}  // namespace schubert
