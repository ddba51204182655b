#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "schubcalc/parabolic.hpp"

namespace kostant {

using parabolic::ContextPtr;
using parabolic::ZWeight;
using rootsys::WeylElt;

// rationals with a formal i, i^2 = -1
struct Qi {
  mpq_class re, im;
  Qi() = default;
  Qi(const mpq_class& r) : re(r) {}
  Qi(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}
  Qi(int r) : re(r) {}
  bool is_zero() const { return re == 0 && im == 0; }
  Qi conj() const { return {re, -im}; }
  Qi operator+(const Qi& o) const { return {re + o.re, im + o.im}; }
  Qi operator-(const Qi& o) const { return {re - o.re, im - o.im}; }
  Qi operator-() const { return {-re, -im}; }
  Qi operator*(const Qi& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  Qi operator/(const Qi& o) const;
  Qi& operator+=(const Qi& o) { re += o.re; im += o.im; return *this; }
  bool operator==(const Qi& o) const { return re == o.re && im == o.im; }
  bool operator!=(const Qi& o) const { return !(*this == o); }
};

// Chevalley basis of g: h_1..h_n, then e_r for every root index r
class Chevalley {
 public:
  explicit Chevalley(rootsys::RootSystemPtr rs);
  const rootsys::RootSystem& rs() const { return *rs_; }
  int dim() const { return n_ + rs_->num_roots(); }
  int h(int i) const { return i; }
  int e(int r) const { return n_ + r; }
  // N_{r,s}: [e_r, e_s] = N_{r,s} e_{r+s}; 0 when r+s is not a root
  mpq_class N(int r, int s) const;
  std::vector<std::pair<int, mpq_class>> bracket(int a, int b) const;
  // tr(ad a o ad b)
  mpq_class killing(int a, int b) const;

 private:
  mpq_class Npos(int r, int s) const;
  rootsys::RootSystemPtr rs_;
  int n_;
  std::vector<std::vector<mpq_class>> Np_;   // positive pairs
  std::vector<std::vector<bool>> has_;
};

using Mono = uint32_t;          // bit k = covector k of the basis of r*
using ExtElt = std::map<Mono, Qi>;

// sparse operator: column j lists (row, coeff)
struct Op {
  std::size_t D = 0;
  std::vector<std::vector<std::pair<Mono, Qi>>> cols;
  ExtElt apply(const ExtElt& x) const;
  bool is_zero() const;
};
Op compose(const Op& a, const Op& b);   // a o b
Op add(const Op& a, const Op& b);
Op scale(const Op& a, const Qi& c);
bool op_equal(const Op& a, const Op& b);

struct Options {
  int max_u = 6;                  // largest |Phi(u)| accepted
  std::size_t max_module = 4096;  // largest Levi-module closure
};

struct Index {  // (sum of alpha|_Z over u^- covectors, -p)
  ZWeight z;
  int deg = 0;
  bool operator<(const Index& o) const { return std::tie(deg, z) < std::tie(o.deg, o.z); }
  bool operator==(const Index& o) const = default;
};

class KostantContext {
 public:
  KostantContext(ContextPtr ctx, Options opt = {});

  const parabolic::ParabolicContext& ctx() const { return *ctx_; }
  const Chevalley& lie() const { return lie_; }
  int m() const { return m_; }        // dim r
  int nu() const { return nu_; }      // dim u
  std::size_t D() const { return std::size_t{1} << m_; }
  // root index of basis vector k of r: -U[k] for k < nu, U[k-nu] after
  int root_of(int k) const { return rb_[k]; }
  const mpq_class& kappa(int k) const { return kappa_[k]; }   // kappa(e_a, e_{-a})

  const Op& b() const { return b_; }
  const Op& b10() const { return b10_; }
  const Op& b01() const { return b01_; }
  const Op& dstar() const { return dstar_; }
  const Op& d_m10() const { return dm10_; }
  const Op& d_m01() const { return dm01_; }
  const Op& L() const { return L_; }
  const Op& L_half() const { return Lhalf_; }
  const Op& E() const { return E_; }
  const Op& L0() const { return L0_; }
  const Op& R() const { return R_; }
  const std::vector<Op>& levi_ops() const { return levi_ops_; }
  // Killing transport of the Chevalley-Eilenberg boundary of r
  Op transported_boundary() const;

  int p_of(Mono x) const;
  int q_of(Mono x) const;
  rootsys::Root t_weight(Mono x) const;
  Index index_of(Mono x) const;

  bool levi_invariant(const ExtElt& x) const;
  // C_{(alpha,p)} bases; keys are the indices that occur
  const std::map<Index, std::vector<ExtElt>>& C() const;

  // h_w and s_w; throw UsageError unless w in W^P
  ExtElt h(const WeylElt& w) const;
  ExtElt s(const WeylElt& w) const;
  Index expected_index(const WeylElt& w) const;   // ((rho - w^{-1} rho)|_Z, -l(w))

  // {e_a, e_b} = -kappa(e_a, e_b^*) on r, star e_g^* = -e_{-g}, from traces
  std::vector<std::vector<Qi>> hermitian_gram() const;
  // inner product on the exterior algebra induced by the form on r*
  Qi inner(const ExtElt& x, const ExtElt& y) const;

 private:
  Op derivation(const std::vector<ExtElt>& gen_img, bool odd) const;
  Op coadjoint_trunc(int k) const;
  Op coadjoint_full(int gbasis) const;
  Op split(const Op& a, int dp, int dq) const;
  void build_L0();
  std::vector<ExtElt> closure(const ExtElt& start, const std::vector<const Op*>& ops) const;

  ContextPtr ctx_;
  Options opt_;
  Chevalley lie_;
  int m_ = 0, nu_ = 0;
  std::vector<int> rb_;
  std::map<int, int> ridx_;
  std::vector<mpq_class> kappa_;
  std::vector<Qi> gdiag_;   // metric on monomials, diagonal
  Op b_, b10_, b01_, dstar_, dm10_, dm01_, L_, Lhalf_, E_, L0_, R_;
  std::vector<Op> levi_ops_;
  mutable bool c_done_ = false;
  mutable std::map<Index, std::vector<ExtElt>> C_;
  mutable std::vector<std::vector<Qi>> hs_;
};

bool index_leq(const Index& a, const Index& b);
bool index_less(const Index& a, const Index& b);   // <= and !=

// exact identities checked on the whole algebra or on C
struct CheckResult {
  bool b_squared_zero = false;
  bool dstar_squared_zero = false;
  bool dstar_is_transport = false;
  bool L_hermitian = false;
  bool L_matches_half_on_C = false;
  bool L_matches_half_everywhere = false;
  std::string half_ratio_on_C;   // c with L = c * L_half on C, or "none"
  bool pieces_orthogonal = false;
  bool L_keeps_pieces = false;
  bool R_drops_weight = false;
  int R_nilpotency = -1;         // smallest k with R^k = 0, -1 if none found
  bool sw_levi_invariant = false;
  bool hw_grading = false;       // h_w in C_{((rho - w^{-1}rho)|_Z, -l(w))}
  bool sw_filtration = false;    // s_w in F^{<= that index} C
  bool sw_closed = false;        // b s_w = 0
  std::size_t dimC = 0;
};
CheckResult run_checks(const KostantContext& K);

// s_w as (negative part, positive part, coeff) rows, roots written in simple-root coordinates
struct FormTerm {
  std::vector<rootsys::Root> negative_part, positive_part;
  Qi coeff;
};
std::vector<FormTerm> form_terms(const KostantContext& K, const ExtElt& x);

}  // namespace kostant
