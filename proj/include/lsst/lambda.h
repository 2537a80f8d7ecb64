#ifndef LSST_LAMBDA_H
#define LSST_LAMBDA_H

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lsst {

// ---------------------------------------------------------------------------
// Types

enum class TypeKind { Base, Lin, Tensor, One, Arrow, With, Plus, Top, Zero };

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TypeNode {
  TypeKind kind;
  Type left;
  Type right;
};

Type t_base();
Type t_one();
Type t_top();
Type t_zero();
Type t_lin(Type a, Type b);
Type t_arrow(Type a, Type b);
Type t_tensor(Type a, Type b);
Type t_with(Type a, Type b);
Type t_plus(Type a, Type b);

bool type_equal(const Type& a, const Type& b);
// ASCII surface syntax: o, 1, T, 0, *, &, +, -o, ->.
std::string format_type(const Type& t);
Type parse_type(const std::string& text);

bool is_purely_linear(const Type& t);
Type substitute_type(const Type& t, const Type& kappa);

// ---------------------------------------------------------------------------
// Terms

enum class TermKind {
  Var, LamLin, LamBang, App, TensorPair, LetTensor, Unit, LetUnit,
  WithPair, Proj1, Proj2, Inj1, Inj2, Case, TopIntro, Abort
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

// Field usage by kind:
//   Var x; LamLin/LamBang x.kids[0]; App kids[0] kids[1];
//   TensorPair/WithPair kids[0], kids[1]; LetTensor x*y = kids[0] in kids[1];
//   LetUnit () = kids[0] in kids[1]; Proj/Inj/Abort kids[0];
//   Case kids[0] of {x.kids[1] | y.kids[2]}.
struct TermNode {
  TermKind kind;
  std::string x;
  std::string y;
  std::vector<Term> kids;
  std::vector<std::string> free;  // sorted free variables
};

Term var(const std::string& x);
Term lam(const std::string& x, Term body);
Term lam_bang(const std::string& x, Term body);
Term app(Term f, Term a);
Term app(Term f, const std::vector<Term>& args);
Term tensor_pair(Term a, Term b);
Term let_tensor(const std::string& x, const std::string& y, Term t, Term body);
Term unit();
Term let_unit(Term t, Term body);
Term with_pair(Term a, Term b);
Term proj(int i, Term t);
Term inj(int i, Term t);
Term case_of(Term t, const std::string& x, Term l, const std::string& y, Term r);
Term top_intro();
Term abort_term(Term t);

// Same node kind and binders as t, with new children.
Term rebuild(const Term& t, std::vector<Term> kids);

bool is_free(const Term& t, const std::string& x);
int term_size(const Term& t);
std::string format_term(const Term& t);
Term parse_term(const std::string& text);

// Capture-avoiding substitution t[u/x].
Term substitute(const Term& t, const std::string& x, const Term& u);
bool alpha_equal(const Term& a, const Term& b);
// A variable name not produced before by this process.
std::string fresh_variable(const std::string& base);

// ---------------------------------------------------------------------------
// Typing

struct TypingContext {
  std::vector<std::pair<std::string, Type>> nonlinear;  // Ψ
  std::vector<std::pair<std::string, Type>> linear;     // Δ
};

// Types assigned to every subterm by a successful check.
using TypeAnnotations = std::unordered_map<const TermNode*, Type>;

// Infers the type of t in ctx. When expected is given the result is unified
// with it. Unconstrained type variables default to o.
Type typecheck(const Term& t, const TypingContext& ctx = {}, const Type& expected = nullptr,
               TypeAnnotations* annotations = nullptr);

// ---------------------------------------------------------------------------
// Reduction

enum class Strategy { Leftmost, Rightmost };

// One →βext step: a β-redex if there is one anywhere, otherwise an extrusion.
std::optional<Term> beta_extr_step(const Term& t, Strategy s = Strategy::Leftmost);

inline constexpr long kDefaultFuel = 1000000;

struct NormalizeStats {
  long beta_steps = 0;
  long extrusion_steps = 0;
};

Term normalize(const Term& t, long fuel = kDefaultFuel, Strategy s = Strategy::Leftmost,
               NormalizeStats* stats = nullptr);

bool check_normal(const Term& t);
bool check_neutral(const Term& t);

// Canonical representative modulo the commuting conversions.
Term cc_canonical(const Term& t);
bool cc_equal(const Term& a, const Term& b);

}  // namespace lsst

#endif  // LSST_LAMBDA_H
