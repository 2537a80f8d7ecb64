#ifndef LSST_COMPILE_H
#define LSST_COMPILE_H

// Semantics of purely linear terms in Sr_⊕&, and the compiler from terms of
// type Str_Σ[κ] ⊸ Str_Γ to copyless SSTs.
//
// A term typed Δ ⊢ t : τ denotes a morphism ⊗⟦Δ⟧ → ⟦τ⟧, with the context
// in the given order. The nonlinear constants of Γ̃ are points: a unary
// letter b is Λ′(• ← b•) and eps is the empty word.

#include <string>
#include <utility>
#include <vector>

#include "lsst/church.h"
#include "lsst/closure.h"
#include "lsst/compose.h"
#include "lsst/lambda.h"
#include "lsst/sst.h"

namespace lsst {

// o ↦ ι(1); 1, ⊤, 0, ⊗, &, ⊕, ⊸ ↦ the matching structure. Throws
// NotPurelyLinear on →.
Obj denote_type(const Type& t);

// The point of constant i of a string alphabet's Γ̃.
Mor denote_constant(const RankedAlphabet& gamma, int i);

using LinearContext = std::vector<std::pair<std::string, Type>>;

// ⊗⟦linear⟧ → ⟦τ⟧ for t typed in Γ̃; linear. Throws NotPurelyLinear and
// the typing errors.
Mor denote_term(const Term& t, const RankedAlphabet& gamma, const LinearContext& linear = {},
                const Type& expected = nullptr);

// The single-state machine over Sr_⊕& with memory ⟦κ⟧ ⊸ ⟦κ⟧: init Λ′(id),
// δ(a) = h ↦ h ∘ ⟦d_a⟧, output ⟦o⟧ applied to h ⟦v⟧.
GenSst<OplusWithSr> string_term_machine(const Shape& shape, const Type& kappa, const Word& sigma,
                                        const Word& gamma);

SstMachine compile_string_term(const Term& f, const Type& kappa, const Word& sigma, const Word& gamma,
                               long fuel = kDefaultFuel, size_t max_states = 1000000);

}  // namespace lsst

#endif  // LSST_COMPILE_H
