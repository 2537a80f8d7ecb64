#ifndef LSST_CLOSURE_H
#define LSST_CLOSURE_H

// Sr_⊕&, represented symbolically. An object is a formula over register
// sets built with ⊗, &, ⊕ and ⊸; its summands and components are computed on
// demand, so objects such as (A ⊸ A) never need to be enumerated. Tensor, &
// and ⊕ are flattened n-ary nodes, which makes associativity and unit laws
// hold on the nose.

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "lsst/sst.h"

namespace lsst {

// ---------------------------------------------------------------------------
// Internal homsets of Sr_⊕ on single register sets

// A partial map f̂ : R ⇀ S with a total order on every fiber; target[r] is
// -1 when r is outside the domain, rank[r] is r's position in its fiber.
struct HomShape {
  int cod = 0;
  std::vector<int> target;
  std::vector<int> rank;

  int dom() const { return static_cast<int>(target.size()); }
  // Registers of R on which f̂ is defined, increasing.
  std::vector<int> domain() const;
  int domain_size() const;
  auto operator<=>(const HomShape&) const = default;
};

// Canonical enumeration: target vectors lexicographically (undefined first),
// then fiber orders lexicographically.
std::vector<HomShape> hom_shapes(int r, int s);
// Number of registers of the summand ι(S + dom f̂).
inline int hom_registers(const HomShape& sh) { return sh.cod + sh.domain_size(); }

struct Curried {
  HomShape shape;
  RT h;  // T → S + dom f̂
};

// Λ for f : T + R → S with |T| = t_regs: split every f(s) at the registers of R.
Curried curry_sr(const RT& f, int t_regs);
// ev : (S + dom f̂) + R → S, s ← s r₁ r̂₁ r₂ r̂₂ … in fiber order.
RT eval_sr(const HomShape& sh);

// ---------------------------------------------------------------------------
// Objects

// A summand index. Base: empty. Tensor/With: one kid per factor. Plus: tag
// selects the alternative, one kid. Lin: one kid per summand of the domain,
// each {v, choice_y…} with choice = {tag x, data = shape}.
struct Idx {
  int tag = 0;
  std::vector<int> data;
  std::vector<Idx> kids;
  std::strong_ordering operator<=>(const Idx& o) const;
  bool operator==(const Idx& o) const;
};
std::string format_idx(const Idx& i);

enum class ObjKind { Base, Tensor, With, Plus, Lin };

struct ObjNode;
using Obj = std::shared_ptr<const ObjNode>;

struct LinDomain {
  std::vector<Idx> summands;
  std::map<Idx, int> ordinal;
};

struct ObjNode {
  ObjKind kind = ObjKind::Base;
  int regs = 0;             // Base
  std::vector<Obj> parts;   // Tensor/With/Plus factors; Lin {A, B}
  std::shared_ptr<const LinDomain> lin_domain;  // Lin: summands of A
};

Obj obj_base(int n);  // ι(n registers); n = 0 is the unit
Obj obj_unit();
Obj obj_top();
Obj obj_zero();
Obj obj_tensor(const std::vector<Obj>& parts);
Obj obj_with(const std::vector<Obj>& parts);
Obj obj_plus(const std::vector<Obj>& parts);
Obj obj_lin(const Obj& a, const Obj& b);
// ⊕ over shapes of ι(S + dom f̂).
Obj hom_obj_oplus(int r, int s);

bool obj_equal(const Obj& a, const Obj& b);
std::string format_obj(const Obj& a);

// Register count of each component of summand i.
std::vector<int> component_registers(const Obj& a, const Idx& i);
int component_count(const Obj& a, const Idx& i);
// All summands; throws IndexMismatch past the limit.
std::vector<Idx> summands(const Obj& a, size_t limit = 100000);
// Whether i is a well-formed summand index of a.
bool valid_summand(const Obj& a, const Idx& i);

// ---------------------------------------------------------------------------
// Morphisms: Π_u Σ_v Π_y Σ_x Hom(C_x, D_y), evaluated per source summand.

struct MorAt {
  Idx cod;
  std::vector<std::pair<int, RT>> comps;  // per target component y: (x, C_x → D_y)
  bool operator==(const MorAt&) const = default;
};

struct Mor {
  Obj dom;
  Obj cod;
  std::function<MorAt(const Idx&)> at;
};

Mor mor_id(const Obj& a);
// g ∘ f
Mor mor_compose(const Mor& f, const Mor& g);
Mor mor_compose(const std::vector<Mor>& chain);
Mor mor_tensor(const Mor& f, const Mor& g);
Mor mor_tensor(const std::vector<Mor>& fs);
// ⊗ groups → ⊗ groups[perm[0]], groups[perm[1]], …
Mor mor_permute(const std::vector<Obj>& groups, const std::vector<int>& perm);
Mor mor_pair(const Obj& dom, const std::vector<Mor>& fs);
Mor mor_proj(const std::vector<Obj>& parts, int i);
Mor mor_inj(const std::vector<Obj>& parts, int i);
Mor mor_copair(const std::vector<Obj>& parts, const std::vector<Mor>& fs, const Obj& cod);
// [f_i] : ctx ⊗ (⊕ parts) → C from f_i : ctx ⊗ parts[i] → C (distributivity).
Mor mor_case(const Obj& ctx, const std::vector<Obj>& parts, const std::vector<Mor>& fs, const Obj& cod);
Mor mor_to_top(const Obj& a);
// Weakening a → unit; every summand of a needs a component.
Mor mor_discard(const Obj& a);
// The unique morphism out of an object without summands.
Mor mor_from_empty(const Obj& a, const Obj& b);
// A point unit → ι(n) given by a constant register transition ∅ → n.
Mor mor_point(const RT& constant);
// Embedding of a register transition as ι(R) → ι(S).
Mor mor_embed(const RT& t);

// Λ(f) : C → (A ⊸ B) for f : C ⊗ A → B.
Mor curry(const Mor& f, const Obj& c, const Obj& a);
// ev : (A ⊸ B) ⊗ A → B.
Mor eval(const Obj& a, const Obj& b);
// ev ∘ (g ⊗ id_A) for g : C → (A ⊸ B).
Mor uncurry(const Mor& g);

// Memoizes evaluation per summand (thread-safe).
Mor memoize(const Mor& f);
// Structural equality by enumerating the domain's summands.
bool mor_equal(const Mor& f, const Mor& g, size_t limit = 100000);

// Splitting/joining summand indices of a ⊗ b.
std::pair<Idx, Idx> split_tensor(const Obj& a, const Obj& b, const Idx& i);
Idx join_tensor(const Obj& a, const Obj& b, const Idx& ia, const Idx& ib);

// ---------------------------------------------------------------------------
// Index shuffles of the monoidal-closure chain.

// (†): Σ_i Hom(&_x ι(Z_x), D_i) ≅ Hom(&_x ι(Z_x), ⊕_i D_i), at one summand.
MorAt dagger_forward(const std::vector<Obj>& d, int i, const MorAt& g);
std::pair<int, MorAt> dagger_backward(const std::vector<Obj>& d, const MorAt& f);
// (♥): Hom(&_x ι(Z_x), ⊕_u ι(E_u)) ≅ Σ_x Hom_⊕(ι(Z_x), ⊕_u ι(E_u)).
struct HeartPart {
  int x = 0;    // chosen component of the domain
  int u = 0;    // chosen summand of the codomain
  RT map;       // Z_x → E_u
  bool operator==(const HeartPart&) const = default;
};
HeartPart heart_forward(const Obj& cod, const MorAt& f);
MorAt heart_backward(const Obj& cod, const HeartPart& p);

// ---------------------------------------------------------------------------
// Internal monoid on A ⊸ A, with μ(φ ⊗ ψ) = ψ ∘ φ (first φ, then ψ).

struct EndoMonoid {
  Obj carrier;
  Mor mu;   // carrier ⊗ carrier → carrier
  Mor eta;  // unit → carrier
};

// (A ⊸ B) ⊗ (B ⊸ C) → (A ⊸ C), φ ⊗ ψ ↦ ψ ∘ φ.
Mor internal_compose(const Obj& a, const Obj& b, const Obj& c);

EndoMonoid endo_monoid(const Obj& a);
// The same monoid on M & 1, whose second component allows discarding.
EndoMonoid with_unit_monoid(const EndoMonoid& m);
// Λ'(f) : unit → (A ⊸ B) for f : A → B.
Mor name_of(const Mor& f);
// (B ⊸ C) → (B ⊸ C) ⊗ B → C for a point φ : unit → B.
Mor appto(const Mor& phi, const Obj& c);

}  // namespace lsst

#endif  // LSST_CLOSURE_H
