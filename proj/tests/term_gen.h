// Random well-typed terms over the constants of a string alphabet's Γ̃.
#ifndef LSST_TESTS_TERM_GEN_H
#define LSST_TESTS_TERM_GEN_H

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lsst/church.h"
#include "lsst/lambda.h"

namespace gen {

using lsst::Term;
using lsst::Type;

struct TypedTerm {
  Term term;
  Type type;
  std::vector<std::pair<std::string, Type>> free;  // linear variables
};

// Grows a pool of terms bottom-up: every rule combines pool items whose
// linear variables are disjoint (or, for with-pairs, equal), so each item is
// well typed in Γ̃ plus its free variables. closed() abstracts what is left.
class TermGenerator {
 public:
  // letters: the unary constants; eps is the nullary one.
  TermGenerator(std::mt19937& rng, std::vector<std::string> letters, bool nonlinear)
      : rng_(rng), letters_(std::move(letters)), nonlinear_(nonlinear) {}

  Type random_type(int depth) {
    using namespace lsst;
    int k = depth <= 0 ? static_cast<int>(pick(3)) : static_cast<int>(pick(7));
    switch (k) {
      case 0:
      case 1:
        return t_base();
      case 2:
        return t_one();
      case 3:
        return t_lin(random_type(depth - 1), random_type(depth - 1));
      case 4:
        return t_tensor(random_type(depth - 1), random_type(depth - 1));
      case 5:
        return t_with(random_type(depth - 1), random_type(depth - 1));
      default:
        return t_plus(random_type(depth - 1), random_type(depth - 1));
    }
  }

  TypedTerm closed(int max_size) {
    for (;;) {
      pool_.clear();
      seed();
      for (int step = 0; step < 120; ++step) grow(max_size);
      // prefer the larger items
      std::vector<const TypedTerm*> fit;
      for (const auto& t : pool_) {
        int size = lsst::term_size(t.term) + static_cast<int>(t.free.size());
        if (size <= max_size && lsst::term_size(t.term) >= 3) fit.push_back(&t);
      }
      if (fit.empty()) continue;
      std::sort(fit.begin(), fit.end(), [](const TypedTerm* a, const TypedTerm* b) {
        return lsst::term_size(a->term) > lsst::term_size(b->term);
      });
      return close(*fit[pick(std::min<size_t>(fit.size(), 8))]);
    }
  }

 private:
  size_t pick(size_t n) { return static_cast<size_t>(rng_() % n); }

  std::string fresh() { return "v" + std::to_string(counter_++); }

  TypedTerm fresh_var(const Type& ty) {
    std::string x = fresh();
    return {lsst::var(x), ty, {{x, ty}}};
  }

  void seed() {
    using namespace lsst;
    pool_.push_back({var("eps"), t_base(), {}});
    for (const auto& c : letters_) pool_.push_back({var(c), t_lin(t_base(), t_base()), {}});
    pool_.push_back({unit(), t_one(), {}});
    for (int k = 0; k < 4; ++k) pool_.push_back(fresh_var(random_type(2)));
  }

  static bool disjoint(const TypedTerm& a, const TypedTerm& b) {
    for (const auto& [x, tx] : a.free)
      for (const auto& [y, ty] : b.free)
        if (x == y) return false;
    return true;
  }

  static std::vector<std::pair<std::string, Type>> merge(const TypedTerm& a, const TypedTerm& b) {
    auto out = a.free;
    out.insert(out.end(), b.free.begin(), b.free.end());
    return out;
  }

  // A pool item of the given type sharing no variable with avoid, or a new
  // variable.
  TypedTerm argument(const Type& ty, const TypedTerm& avoid) {
    std::vector<size_t> fits;
    for (size_t k = 0; k < pool_.size(); ++k)
      if (lsst::type_equal(pool_[k].type, ty) && disjoint(pool_[k], avoid)) fits.push_back(k);
    if (!fits.empty() && pick(4) != 0) return pool_[fits[pick(fits.size())]];
    return fresh_var(ty);
  }

  TypedTerm without(const TypedTerm& t, const std::string& x) {
    TypedTerm out = t;
    out.free.erase(std::remove_if(out.free.begin(), out.free.end(), [&](const auto& p) { return p.first == x; }),
                   out.free.end());
    return out;
  }

  void add(TypedTerm t, int max_size) {
    if (lsst::term_size(t.term) + static_cast<int>(t.free.size()) <= max_size) pool_.push_back(std::move(t));
  }

  void grow(int max_size) {
    using namespace lsst;
    const TypedTerm t = pool_[pick(pool_.size())];
    switch (pick(nonlinear_ ? 14 : 13)) {
      case 0:
      case 1: {  // application
        if (t.type->kind != TypeKind::Lin) return;
        TypedTerm a = argument(t.type->left, t);
        add({app(t.term, a.term), t.type->right, merge(t, a)}, max_size);
        return;
      }
      case 2: {  // abstraction
        if (t.free.empty()) return;
        auto [x, ty] = t.free[pick(t.free.size())];
        TypedTerm body = without(t, x);
        add({lam(x, t.term), t_lin(ty, t.type), body.free}, max_size);
        return;
      }
      case 3:
      case 4: {  // β-redex
        if (t.free.empty()) return;
        auto [x, ty] = t.free[pick(t.free.size())];
        TypedTerm body = without(t, x);
        TypedTerm a = argument(ty, body);
        add({app(lam(x, t.term), a.term), t.type, merge(body, a)}, max_size);
        return;
      }
      case 5: {  // tensor pair
        const TypedTerm& u = pool_[pick(pool_.size())];
        if (!disjoint(t, u)) return;
        add({tensor_pair(t.term, u.term), t_tensor(t.type, u.type), merge(t, u)}, max_size);
        return;
      }
      case 6: {  // let x*y
        if (t.free.size() < 2) return;
        size_t i = pick(t.free.size()), j = pick(t.free.size());
        if (i == j) return;
        auto [x, tx] = t.free[i];
        auto [y, ty] = t.free[j];
        TypedTerm body = without(without(t, x), y);
        TypedTerm s = argument(t_tensor(tx, ty), body);
        add({let_tensor(x, y, s.term, t.term), t.type, merge(body, s)}, max_size);
        return;
      }
      case 7: {  // let ()
        TypedTerm s = argument(t_one(), t);
        add({let_unit(s.term, t.term), t.type, merge(s, t)}, max_size);
        return;
      }
      case 8: {  // with pair, possibly against ⊤
        int k = static_cast<int>(pick(3));
        if (k == 0) add({with_pair(t.term, t.term), t_with(t.type, t.type), t.free}, max_size);
        else if (k == 1) add({proj(1, with_pair(t.term, top_intro())), t.type, t.free}, max_size);
        else add({proj(2, with_pair(top_intro(), t.term)), t.type, t.free}, max_size);
        return;
      }
      case 9: {  // projection
        if (t.type->kind != TypeKind::With) return;
        int i = 1 + static_cast<int>(pick(2));
        add({proj(i, t.term), i == 1 ? t.type->left : t.type->right, t.free}, max_size);
        return;
      }
      case 10: {  // injection
        Type other = pick(2) ? t.type : random_type(1);
        if (pick(2)) add({inj(1, t.term), t_plus(t.type, other), t.free}, max_size);
        else add({inj(2, t.term), t_plus(other, t.type), t.free}, max_size);
        return;
      }
      case 11: {  // case with both branches built from t
        if (t.free.empty()) return;
        auto [x, ty] = t.free[pick(t.free.size())];
        TypedTerm body = without(t, x);
        std::string y = fresh();
        Term right = substitute(t.term, x, var(y));
        Type st = t_plus(ty, ty);
        TypedTerm s = argument(st, body);
        add({case_of(s.term, x, t.term, y, right), t.type, merge(body, s)}, max_size);
        return;
      }
      case 12: {  // a letter applied, or abort
        if (pick(5) == 0) {
          TypedTerm z = fresh_var(t_zero());
          add({abort_term(z.term), random_type(1), z.free}, max_size);
          return;
        }
        if (t.type->kind != TypeKind::Base) return;
        add({app(var(letters_[pick(letters_.size())]), t.term), t_base(), t.free}, max_size);
        return;
      }
      default: {  // nonlinear redex over a letter
        const std::string& c = letters_[pick(letters_.size())];
        if (!is_free(t.term, c)) return;
        std::string z = fresh();
        Term body = substitute(t.term, c, var(z));
        add({app(lam_bang(z, body), var(letters_[pick(letters_.size())])), t.type, t.free}, max_size);
        return;
      }
    }
  }

  TypedTerm close(TypedTerm t) {
    std::shuffle(t.free.begin(), t.free.end(), rng_);
    while (!t.free.empty()) {
      auto [x, ty] = t.free.back();
      t.free.pop_back();
      t.term = lsst::lam(x, t.term);
      t.type = lsst::t_lin(ty, t.type);
    }
    return t;
  }

  std::mt19937& rng_;
  std::vector<std::string> letters_;
  bool nonlinear_;
  std::vector<TypedTerm> pool_;
  int counter_ = 0;
};

}  // namespace gen

#endif  // LSST_TESTS_TERM_GEN_H
