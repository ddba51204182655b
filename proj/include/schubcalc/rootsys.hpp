#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>
#include <bitset>

#include <gmpxx.h>

#include "schubcalc/errors.hpp"

namespace rootsys {

using Root = std::vector<int>;         // simple-root coordinates
using QVec = std::vector<mpq_class>;   // rational vector, same basis
using RootMask = std::bitset<128>;     // subsets of positive roots (E8 has 120)

struct TypeLabel {
  char series = 'A';
  int rank = 1;
  std::string str() const { return std::string(1, series) + std::to_string(rank); }
  bool operator==(const TypeLabel& o) const { return series == o.series && rank == o.rank; }
};

TypeLabel parse_type(const std::string& s);

class RootSystem;

// Weyl group element. Canonical word = lexicographically smallest reduced
// word (0-based letters). Equality is equality of the root permutation.
class WeylElt {
 public:
  WeylElt() = default;

  const RootSystem& system() const { return *rs_; }
  const std::vector<int>& word() const { return word_; }
  int length() const { return len_; }
  // perm()[r] = index of w(root r)
  const std::vector<uint16_t>& perm() const { return perm_; }
  int operator()(int r) const { return perm_[r]; }

  std::vector<int> word1() const;  // 1-based, for output
  std::string str() const;         // "s1s2" style, "e" for identity

  bool operator==(const WeylElt& o) const { return perm_ == o.perm_; }
  bool operator!=(const WeylElt& o) const { return !(*this == o); }
  // total order: by length, then canonical word
  bool operator<(const WeylElt& o) const {
    if (len_ != o.len_) return len_ < o.len_;
    return word_ < o.word_;
  }

 private:
  friend class RootSystem;
  const RootSystem* rs_ = nullptr;
  std::vector<uint16_t> perm_;
  std::vector<int> word_;
  int len_ = 0;
};

struct WeylHash {
  std::size_t operator()(const WeylElt& w) const;
};

class RootSystem {
 public:
  explicit RootSystem(TypeLabel t);

  const TypeLabel& type() const { return type_; }
  int rank() const { return n_; }
  const std::vector<std::vector<int>>& cartan() const { return A_; }

  int num_roots() const { return static_cast<int>(roots_.size()); }
  int num_positive() const { return npos_; }
  const Root& root(int r) const { return roots_[r]; }
  const std::vector<Root>& roots() const { return roots_; }
  bool is_positive(int r) const { return r < npos_; }
  int neg(int r) const { return r < npos_ ? r + npos_ : r - npos_; }
  int simple(int i) const { return simple_[i]; }
  int height(int r) const;
  int index_of(const Root& v) const;  // -1 if not a root
  int reflect(int i, int r) const { return refl_[i][r]; }

  const std::vector<std::vector<mpq_class>>& gram() const { return gram_; }
  const mpq_class& len2(int i) const { return len2_[i]; }
  mpq_class ip(const QVec& a, const QVec& b) const;
  mpq_class ip(const Root& a, const Root& b) const;
  const QVec& rho() const { return rho_; }

  // |W| from the degrees of the type
  uint64_t weyl_order() const;

  WeylElt identity() const;
  WeylElt from_word(const std::vector<int>& word0) const;   // 0-based
  WeylElt from_word1(const std::vector<int>& word1) const;  // 1-based, validated
  WeylElt simple_reflection(int i) const;
  WeylElt mul(const WeylElt& a, const WeylElt& b) const;
  WeylElt inverse(const WeylElt& a) const;
  const WeylElt& w0() const { return w0_; }
  const std::vector<int>& w0_word() const { return w0_.word(); }

  bool is_left_descent(const WeylElt& w, int i) const;
  bool is_right_descent(const WeylElt& w, int i) const;

  void check_same(const WeylElt& w) const;

 private:
  WeylElt from_perm(std::vector<uint16_t> perm) const;

  TypeLabel type_;
  int n_ = 0;
  int npos_ = 0;
  std::vector<std::vector<int>> A_;
  std::vector<Root> roots_;
  std::map<Root, int> index_;
  std::vector<int> simple_;
  std::vector<std::vector<int>> refl_;
  std::vector<mpq_class> len2_;
  std::vector<std::vector<mpq_class>> gram_;
  QVec rho_;
  WeylElt w0_;
};

using RootSystemPtr = std::shared_ptr<const RootSystem>;

RootSystemPtr build_root_system(const TypeLabel& t);
RootSystemPtr build_root_system(const std::string& label);

// linear action of w on a vector given in simple-root coordinates
QVec weyl_act(const WeylElt& w, const QVec& v);
Root weyl_act(const WeylElt& w, const Root& v);

// {gamma in Phi^- : w gamma in Phi^+}, as indices of negative roots
std::vector<int> inversion_set(const WeylElt& w);
// same set, as a mask over positive root indices p (gamma = -root p)
RootMask inversion_mask(const WeylElt& w);

bool bruhat_leq(const WeylElt& u, const WeylElt& v);
bool weak_leq(const WeylElt& u, const WeylElt& v);

struct EnumOptions {
  bool allow = false;        // full enumeration is opt-in
  uint64_t bound = 51840;
};

// all of W sorted by (length, word); throws BudgetError past the bound
std::vector<WeylElt> enumerate_weyl(const RootSystem& rs, const EnumOptions& opt);

QVec to_qvec(const Root& r);

}  // namespace rootsys
