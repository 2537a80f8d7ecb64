#ifndef LSST_COMPOSE_H
#define LSST_COMPOSE_H

// Precomposition of single-state machines by copyless SSTs, and the
// composition of two copyless SSTs through Sr_⊕&.
//
// Given a monoid object M in a symmetric monoidal category with a discard
// map M → 1 and points m_c : 1 → M per letter, Sr embeds by R ↦ M^{⊗R}; a
// register transition becomes a permutation followed by one product per
// target register (letters contribute their points, the empty word the unit)
// and a discard per unused register.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lsst/closure.h"
#include "lsst/error.h"
#include "lsst/forest.h"
#include "lsst/sst.h"
#include "lsst/streaming.h"

namespace lsst {

// Capabilities needed by the embedding.
template <class C>
concept Permutable = Monoidal<C> && requires(std::vector<typename C::Obj> gs, std::vector<int> perm) {
  { C::permute(gs, perm) } -> std::convertible_to<typename C::Mor>;
};

template <class C>
struct MonoidSetting {
  typename C::Obj carrier;      // M
  typename C::Mor mu;           // M ⊗ M → M; μ(φ ⊗ ψ) acts as φ then ψ
  typename C::Mor eta;          // 1 → M
  typename C::Mor discard;      // M → 1
  Word letters;                 // letters with a point
  std::vector<typename C::Mor> points;  // m_c : 1 → M
  typename C::Mor apply;        // M → A: run on the initial memory of T_f

  const typename C::Mor& point(char32_t c) const {
    auto k = letters.find(c);
    if (k == Word::npos) throw DomainMismatch("letter '" + to_utf8(c) + "' has no point in the target");
    return points[k];
  }
};

template <Permutable C>
typename C::Obj tensor_power(const typename C::Obj& m, int n) {
  typename C::Obj out = C::unit();
  for (int k = 0; k < n; ++k) out = k == 0 ? m : C::tensor(out, m);
  return out;
}

template <Permutable C>
typename C::Mor tensor_all(const std::vector<typename C::Mor>& fs) {
  if (fs.empty()) return C::id(C::unit());
  typename C::Mor out = fs[0];
  for (size_t k = 1; k < fs.size(); ++k) out = C::tensor_mor(out, fs[k]);
  return out;
}

// F(t) : M^{⊗R} → M^{⊗S} for a copyless t : R → S.
template <Permutable C>
typename C::Mor functor_on_transition(const MonoidSetting<C>& s, const RT& t) {
  if (!check_copyless(t)) throw DomainMismatch("functor applied to a transition that is not copyless");
  std::vector<int> order;
  std::vector<typename C::Mor> blocks;
  for (const auto& word : t.assign) {
    std::vector<typename C::Mor> items;
    for (const auto& sym : word) {
      if (sym.is_reg()) {
        order.push_back(sym.reg_index());
        items.push_back(C::id(s.carrier));
      } else {
        items.push_back(s.point(sym.value));
      }
    }
    if (items.empty()) {
      blocks.push_back(s.eta);
      continue;
    }
    // left fold: ((x₁ x₂) x₃) …
    typename C::Mor acc = tensor_all<C>(items);
    for (size_t k = 1; k < items.size(); ++k) {
      std::vector<typename C::Mor> step{s.mu};
      for (size_t j = k + 1; j < items.size(); ++j) step.push_back(C::id(s.carrier));
      acc = C::compose(acc, tensor_all<C>(step));
    }
    blocks.push_back(acc);
  }
  for (int r : discarded_registers(t)) {
    order.push_back(r);
    blocks.push_back(s.discard);
  }
  std::vector<typename C::Obj> groups(t.dom, s.carrier);
  return C::compose(C::permute(groups, order), tensor_all<C>(blocks));
}

template <Permutable C>
typename C::Obj functor_on_registers(const MonoidSetting<C>& s, int n) {
  return tensor_power<C>(s.carrier, n);
}

// The machine reading T_g's input, with memory F(R_g), whose output at q is
// o_f ∘ apply ∘ F(o_g(q)).
template <Permutable C>
GenSst<C> precompose(const MonoidSetting<C>& s, const typename C::Mor& output_f, const SstMachine& g) {
  GenSst<C> out;
  out.states = g.num_states();
  out.initial = g.initial;
  out.memory = functor_on_registers(s, g.num_registers());
  out.letters = static_cast<int>(g.alphabet_in.size());
  for (int q = 0; q < g.num_states(); ++q) {
    std::vector<std::pair<int, typename C::Mor>> row;
    for (const auto& t : g.delta[q]) row.push_back({t.next, functor_on_transition(s, t.update)});
    out.delta.push_back(std::move(row));
    if (g.output[q])
      out.output.push_back(C::compose(C::compose(functor_on_transition(s, *g.output[q]), s.apply), output_f));
    else
      out.output.push_back(std::nullopt);
  }
  out.init = functor_on_transition(s, g.init);
  return out;
}

// ---------------------------------------------------------------------------
// Sr_⊕& as a capability struct over the symbolic objects of closure.h.

struct OplusWithSr {
  using Obj = lsst::Obj;
  using Mor = lsst::Mor;
  static Mor id(const Obj& a) { return mor_id(a); }
  static Mor compose(const Mor& f, const Mor& g) { return mor_compose(f, g); }
  static Obj dom(const Mor& f) { return f.dom; }
  static Obj cod(const Mor& f) { return f.cod; }
  static bool equal(const Mor& f, const Mor& g) { return mor_equal(f, g); }
  static Obj unit() { return obj_unit(); }
  static Obj tensor(const Obj& a, const Obj& b) { return obj_tensor({a, b}); }
  static Mor tensor_mor(const Mor& f, const Mor& g) { return mor_tensor(f, g); }
  static Mor permute(const std::vector<Obj>& groups, const std::vector<int>& perm) {
    return mor_permute(groups, perm);
  }
};

// (A ⊸ A) & 1 for A = ⊕_q ι(R_f) with the letter points of f's transitions.
struct SrSetting {
  MonoidSetting<OplusWithSr> monoid;
  Obj memory;  // A
  Mor output;  // A → ι(1) ⊕ ⊤, the ⊤ summand marking an undefined output
};
SrSetting sr_setting(const SstMachine& f);

// Lowers a machine over Sr_⊕& with memory summands as states to one over
// Sr_& (reachable (state, summand) pairs). Outputs land in ι(1), or in
// ι(1) ⊕ ⊤ where the ⊤ summand is undefined.
SdmSst<WithCat<SrCat>> lower_to_with(const GenSst<OplusWithSr>& m, size_t max_states = 1000000);
SstMachine lower_to_sst(const GenSst<OplusWithSr>& m, const Word& alphabet_in, const Word& alphabet_out,
                        size_t max_states = 1000000);

struct ComposeStats {
  size_t with_states = 0;     // reachable (state, summand) pairs
  size_t nd_states = 0;       // live (state, summand, component) triples
  size_t result_states = 0;
  int result_registers = 0;
};

// f ∘ g with the uniformized machine explored on demand.
class LazyComposition {
 public:
  LazyComposition(const SstMachine& f, const SstMachine& g, size_t max_states = 1000000);
  std::optional<Word> run(const Word& w);
  // Explores every reachable state.
  SstMachine materialize(ComposeStats* stats = nullptr);
  size_t explored() const { return u_->size(); }

 private:
  Word in_;
  Word out_;
  size_t with_states_ = 0;
  size_t nd_states_ = 0;
  std::unique_ptr<Uniformizer> u_;
};

// A copyless SST computing f ∘ g.
SstMachine compose_copyless(const SstMachine& f, const SstMachine& g, ComposeStats* stats = nullptr,
                            size_t max_states = 1000000);

// ---------------------------------------------------------------------------
// Finite sets: precomposing a DFA by an SST.

struct Dfa {
  int states = 0;
  int initial = 0;
  Word alphabet;
  std::vector<std::vector<int>> delta;  // [letter][state]
  std::vector<bool> accepting;
  bool accepts(const Word& w) const;
};

// The monoid of endofunctions of the DFA's states, with membership output.
MonoidSetting<FinSetCat> dfa_setting(const Dfa& d);
FinSetCat::Mor dfa_output(const Dfa& d);
// Membership of g(w) in L(d), decided by the precomposed machine.
std::optional<bool> preimage_accepts(const GenSst<FinSetCat>& m, const SstMachine& g, const Word& w);

}  // namespace lsst

#endif  // LSST_COMPOSE_H
