#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "schubcalc/rootsys.hpp"

namespace parabolic {

using rootsys::QVec;
using rootsys::WeylElt;

// coordinates in the basis of restricted simple roots outside Delta_P
using ZWeight = std::vector<mpq_class>;
// Z-weight -> multiplicity
using GdVector = std::map<ZWeight, int>;

enum class Cmp { less, greater, equal, incomparable };
std::string to_string(Cmp c);

class ParabolicContext {
 public:
  ParabolicContext(rootsys::RootSystemPtr rs, std::vector<int> levi0);

  const rootsys::RootSystem& rs() const { return *rs_; }
  rootsys::RootSystemPtr rs_ptr() const { return rs_; }
  const std::vector<int>& levi() const { return levi_; }   // 0-based, sorted
  std::vector<int> levi1() const;
  bool in_levi(int i) const { return in_levi_[i]; }
  bool is_levi_root(int r) const;
  bool is_borel() const { return levi_.empty(); }

  const WeylElt& wP0() const { return wP0_; }
  const WeylElt& top() const { return top_; }   // w0 w0^P, the class of G/P
  int n_dim() const { return n_dim_; }
  int z_rank() const { return static_cast<int>(zidx_.size()); }
  const std::vector<int>& z_simple() const { return zidx_; }

  ZWeight restrict(const QVec& v) const;
  ZWeight restrict(const rootsys::Root& v) const;

  bool in_WP(const WeylElt& w) const;
  void require_WP(const WeylElt& w, const char* what) const;

  // distinct Z-weights of g/p with dim V_i
  const GdVector& levi_component_weights() const { return comp_; }
  const ZWeight& rho_GP() const { return rho_gp_; }

  // W^P sorted, and grouped by length; built on first use
  const std::vector<WeylElt>& reps(uint64_t bound = 51840) const;
  const std::vector<WeylElt>& reps_of_length(int l) const;

 private:
  mutable std::mutex reps_mu_;
  mutable bool reps_done_ = false;
  mutable std::vector<WeylElt> reps_;
  mutable std::vector<std::vector<WeylElt>> by_len_;
  rootsys::RootSystemPtr rs_;
  std::vector<int> levi_;
  std::vector<bool> in_levi_;
  std::vector<int> zidx_;
  WeylElt wP0_, top_;
  int n_dim_ = 0;
  GdVector comp_;
  ZWeight rho_gp_;
};

using ContextPtr = std::shared_ptr<const ParabolicContext>;

ContextPtr make_context(rootsys::RootSystemPtr rs, const std::vector<int>& levi1);

// "1,3" -> {1,3}; "" -> {}
std::vector<int> parse_index_list(const std::string& s);

std::vector<WeylElt> minimal_coset_reps(const ParabolicContext& ctx, uint64_t bound = 51840);
WeylElt poincare_dual(const ParabolicContext& ctx, const WeylElt& v);

Cmp z_compare(const ZWeight& a, const ZWeight& b);
inline bool z_leq(const ZWeight& a, const ZWeight& b) {
  auto c = z_compare(a, b);
  return c == Cmp::less || c == Cmp::equal;
}
ZWeight z_add(const ZWeight& a, const ZWeight& b);
ZWeight z_sub(const ZWeight& a, const ZWeight& b);
ZWeight z_zero(const ParabolicContext& ctx);

GdVector gd_vector(const ParabolicContext& ctx, const WeylElt& w);
GdVector gd_add(const GdVector& a, const GdVector& b);
int gd_mass(const GdVector& g);

ZWeight rho_weight(const ParabolicContext& ctx, const WeylElt& w);
inline const ZWeight& rho_weight_GP(const ParabolicContext& ctx) { return ctx.rho_GP(); }

std::vector<int> stabilizer_simple_roots(const ParabolicContext& ctx, const WeylElt& w);

std::string zweight_str(const ZWeight& z);

}  // namespace parabolic
