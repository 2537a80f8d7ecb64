#ifndef LSST_BRTT_H
#define LSST_BRTT_H

// Bottom-up ranked tree transducers with tree and one-hole-tree registers,
// restricted by a conflict relation, over arbitrary ranked alphabets; and
// the generic C-BRTT evaluator for a symmetric monoidal setting.
//
// A leaf of the input is a nullary letter with its own transition δ(c, ()).
// Output leaves are nullary output letters.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lsst/church.h"
#include "lsst/error.h"
#include "lsst/streaming.h"

namespace lsst {

// Label of the hole in one-hole tree values.
inline constexpr const char* kHoleLabel = "#";

enum class ExprKind { Hole, Reg, Node, Subst };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

// E ::= □ | $r@d | a(E…) | E′[F]. In an assignment d is a child label of the
// input letter; in an output expression it is empty.
struct ExprNode {
  ExprKind kind = ExprKind::Hole;
  std::string name;  // register or letter
  std::string child;
  std::vector<Expr> kids;  // Node: children; Subst: {outer, inner}
};

Expr e_hole();
Expr e_reg(std::string reg, std::string child = "");
Expr e_node(std::string letter, std::vector<Expr> kids = {});
Expr e_subst(Expr outer, Expr inner);

// `#`, `$x@l`, `$x`, `a(E,F)`, bare nullary `c`, postfix `E[F]`.
Expr parse_expr(const std::string& text);
std::string format_expr(const Expr& e);

using Variable = std::pair<std::string, std::string>;  // (register, child)
// Variables in order of occurrence, with repetitions.
std::vector<Variable> expr_variables(const Expr& e);
// Output letters in e.
int expr_letters(const Expr& e);
// Holes of e's values, given which registers hold one-hole trees. Throws
// HoleCountViolation when a substitution's outer part has no single hole.
int hole_count(const Expr& e, const std::set<std::string>& hole_registers);

// Reflexive, symmetric; only the non-diagonal pairs are stored.
class ConflictRelation {
 public:
  ConflictRelation() = default;
  explicit ConflictRelation(const std::vector<std::pair<std::string, std::string>>& pairs);
  void add(const std::string& x, const std::string& y);
  bool conflict(const std::string& x, const std::string& y) const;
  // Stored pairs with x < y, sorted.
  std::vector<std::pair<std::string, std::string>> pairs() const;
  bool trivial() const { return pairs_.empty(); }

 private:
  std::set<std::pair<std::string, std::string>> pairs_;
};

// Tagged variables conflict when their registers do and they come from the
// same child.
bool expr_consistent(const Expr& e, const ConflictRelation& c);

using Assignment = std::map<std::string, Expr>;  // register -> expression

// Both clauses: every expression consistent, and occurrences of conflicting
// variables of one child only in conflicting targets.
bool check_single_use(const Assignment& a, const ConflictRelation& c);

struct BrttRule {
  int next = 0;
  Assignment assign;
};

struct SurBrtt {
  RankedAlphabet input;
  RankedAlphabet output;
  std::vector<std::string> states;
  std::vector<std::string> tree_registers;
  std::vector<std::string> hole_registers;
  ConflictRelation conflict;
  // δ(letter index, child states)
  std::map<std::pair<int, std::vector<int>>, BrttRule> delta;
  std::vector<std::optional<Expr>> output_fn;  // F(q)

  int num_states() const { return static_cast<int>(states.size()); }
  bool is_hole_register(const std::string& r) const;
};

// Problems found in m (empty when well formed and single-use-restricted).
std::vector<std::string> validate_brtt(const SurBrtt& m);
bool check_copyless_brtt(const SurBrtt& m);

struct BrttConfig {
  int state = 0;
  std::map<std::string, Tree> values;
};

// Conf(t). Throws UndefinedOutput on a missing transition.
BrttConfig brtt_config(const SurBrtt& m, const Tree& t);
// F(q_fin) on the final valuation. Throws UndefinedOutput when F is undefined.
Tree run_brtt(const SurBrtt& m, const Tree& t);
// Evaluates e with children's valuations indexed by child label.
Tree eval_expr(const Expr& e, const std::map<std::string, const std::map<std::string, Tree>*>& children);

// Mirror: T ↦ a⟨T, reverse T⟩ over a(l,r) b(l,r) e().
SurBrtt mirror_machine();
// Conditional swap over a(l,r) b(l,r) c() to strings over abc, with x ≍ y.
SurBrtt condswap_machine();

// ---------------------------------------------------------------------------
// Generic C-BRTT: δ(a, child states) = (q, ⊗_{arity(a)} R → R), o : R → ⊥.

template <Monoidal C>
struct GenBrtt {
  int states = 1;
  typename C::Obj memory;
  RankedAlphabet input;
  std::map<std::pair<int, std::vector<int>>, std::pair<int, typename C::Mor>> delta;
  typename C::Mor output;
};

// (δ*_Q(t), δ*_C(t) : 1 → R); tensors are strict.
template <Monoidal C>
std::pair<int, typename C::Mor> gen_brtt_config(const GenBrtt<C>& m, const Tree& t) {
  int a = m.input.index_of(t.label);
  if (a < 0 || static_cast<int>(t.kids.size()) != m.input.rank(a))
    throw DomainMismatch("letter '" + t.label + "' does not fit the input alphabet");
  std::vector<int> qs;
  std::optional<typename C::Mor> args;
  for (const auto& k : t.kids) {
    auto [q, f] = gen_brtt_config(m, k);
    qs.push_back(q);
    args = args ? C::tensor_mor(*args, f) : f;
  }
  auto it = m.delta.find({a, qs});
  if (it == m.delta.end()) throw UndefinedOutput("no transition for '" + t.label + "'");
  const auto& [q, step] = it->second;
  return {q, C::compose(args ? *args : C::id(C::unit()), step)};
}

// o ∘ δ*_C(t) : 1 → ⊥.
template <Monoidal C>
typename C::Mor run_gen_brtt(const GenBrtt<C>& m, const Tree& t) {
  return C::compose(gen_brtt_config(m, t).second, m.output);
}

}  // namespace lsst

#endif  // LSST_BRTT_H
