#pragma once

#include <vector>

#include "schubcalc/report.hpp"
#include "schubcalc/schubert.hpp"

namespace bk {

using parabolic::ContextPtr;
using parabolic::GdVector;
using parabolic::ZWeight;
using rootsys::WeylElt;
using schubert::CohClass;

// (beta, n) in X(Z) x Z with the product order
struct FiltrationIndex {
  ZWeight z_part;
  int degree_part = 0;
  bool operator==(const FiltrationIndex& o) const = default;
};
bool fi_leq(const FiltrationIndex& a, const FiltrationIndex& b);
FiltrationIndex fi_add(const FiltrationIndex& a, const FiltrationIndex& b);
// (rho(X_w), -l(w)) and (rho(G/P), -dim G/P)
FiltrationIndex rho_tilde(const parabolic::ParabolicContext& ctx, const WeylElt& w);
FiltrationIndex rho_tilde_GP(const parabolic::ParabolicContext& ctx);

// needs c_{uvw} != 0, throws UsageError otherwise
bool is_levi_movable(const ContextPtr& ctx, const WeylElt& u, const WeylElt& v, const WeylElt& w,
                     schubert::Budget b = {});

// cup constants kept when gd(u) + gd(v) = gd(w) + gd(G/P)
CohClass bk_product(const ContextPtr& ctx, const WeylElt& u, const WeylElt& v, schubert::Budget b = {});
// cup constants kept when rho~(u) + rho~(v) = rho~(w) + rho~(G/P)
CohClass graded_product(const ContextPtr& ctx, const WeylElt& u, const WeylElt& v, schubert::Budget b = {});

// prod over alpha > 0 with w^{-1} alpha > 0 of (rho, alpha)
mpq_class p_value(const WeylElt& w);

// Phi(w)^c is the disjoint union of Phi(u)^c and Phi(v)^c
bool check_partition_triple(const WeylElt& u, const WeylElt& v, const WeylElt& w);
mpq_class bk_coeff_via_p(const WeylElt& u, const WeylElt& v, const WeylElt& w);

// w in W^P with l(w) = p and rho~(w) <= beta; the classes sigma_{w dual} span F^{<= beta} H^p
std::vector<WeylElt> filtration_span(const parabolic::ParabolicContext& ctx, const FiltrationIndex& beta, int p);

// keep the terms of cls whose rho(X_w) equals rho_Y
CohClass bk_fundamental_class(const CohClass& cls, const ZWeight& rho_Y);

struct SigmaData {
  WeylElt u, v;
  std::vector<int> phi_uv;           // root indices, sorted
  std::vector<int> tangent;          // phi_uv minus Levi and positive roots
  GdVector tangent_weights;
  ZWeight rho_sigma;
};
// requires weak_leq(v dual, u); throws WeakOrderError otherwise
SigmaData sigma_uv(const ContextPtr& ctx, const WeylElt& u, const WeylElt& v);

struct Conj5Options {
  bool use_cup = true;        // also compare with the BGG product when |W| allows
  uint64_t cup_max_weyl = 48;   // F4 products cost ~0.5 s each
  uint64_t enum_bound = 51840;
  bool list_entries = true;   // violations are always listed
  unsigned threads = 0;       // 0 = hardware concurrency
};
report::Report verify_conjecture5(const rootsys::RootSystemPtr& rs, const Conj5Options& opt = {});

report::Report verify_conjecture3_grouping(const ContextPtr& ctx, schubert::Budget b = {});

// "0" or "s1s2 + 2 s2", terms in canonical order
std::string class_str(const CohClass& c);

}  // namespace bk
