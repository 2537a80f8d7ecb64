#ifndef LSST_SST_H
#define LSST_SST_H

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "lsst/text.h"

namespace lsst {

// A symbol of (Γ + R)*: either an output letter or a register index.
struct Sym {
  enum Kind : unsigned char { kLetter, kReg };
  Kind kind = kLetter;
  char32_t value = 0;

  static Sym letter(char32_t c) { return {kLetter, c}; }
  static Sym reg(int r) { return {kReg, static_cast<char32_t>(r)}; }
  bool is_reg() const { return kind == kReg; }
  int reg_index() const { return static_cast<int>(value); }

  auto operator<=>(const Sym&) const = default;
};

using RegWord = std::vector<Sym>;

RegWord literal_word(const Word& w);

// A Γ-register transition R -> S. Registers are the indices 0..dom-1 on the
// input side and 0..cod-1 on the output side; assign[s] is the new value of s.
struct RegisterTransition {
  int dom = 0;
  std::vector<RegWord> assign;

  int cod() const { return static_cast<int>(assign.size()); }
  auto operator<=>(const RegisterTransition&) const = default;
};

using RT = RegisterTransition;
using Tuple = std::vector<Word>;

bool check_copyless(const RT& t);
// Registers of the domain that do not occur in any assignment.
std::vector<int> discarded_registers(const RT& t);

RT identity_rt(int n);
// u ∘ t, substituting t's assignments for u's registers.
RT compose_rt(const RT& t, const RT& u);
// The tuple semantics t†.
Tuple apply_rt(const RT& t, const Tuple& x);
// Disjoint union; the registers of u are shifted after those of t.
RT tensor_rt(const RT& t, const RT& u);
RT terminal_rt(int n);
RT fill_rt(int n);
RT constant_rt(const Tuple& words);
// The register transition R -> S with every register of R placed at the
// permuted position: result register perm[i] receives register i.
RT permutation_rt(const std::vector<int>& perm);
// Rename letters through f (letters only, registers untouched).
template <class F>
RT map_letters(const RT& t, F f) {
  RT out = t;
  for (auto& w : out.assign)
    for (auto& s : w)
      if (!s.is_reg()) s.value = f(s.value);
  return out;
}

std::string format_word(const RegWord& w, const std::vector<std::string>* names = nullptr);
std::string format_rt(const RT& t, const std::vector<std::string>* dom_names = nullptr,
                      const std::vector<std::string>* cod_names = nullptr);

struct SstTransition {
  int next = 0;
  RT update;
  auto operator<=>(const SstTransition&) const = default;
};

// A deterministic copyless SST (Q, q0, R, δ, i, o). Outputs may be partial,
// which only arises for machines produced by uniformization.
struct SstMachine {
  std::vector<std::string> states;
  int initial = 0;
  std::vector<std::string> registers;
  Word alphabet_in;
  Word alphabet_out;
  // delta[q][k] is the transition on alphabet_in[k].
  std::vector<std::vector<SstTransition>> delta;
  RT init;
  std::vector<std::optional<RT>> output;

  int num_states() const { return static_cast<int>(states.size()); }
  int num_registers() const { return static_cast<int>(registers.size()); }
  int letter_index(char32_t c) const;
  bool operator==(const SstMachine&) const = default;
};

// Problems found in a machine (empty when well formed and copyless).
std::vector<std::string> validate_sst(const SstMachine& m);

std::optional<Word> run_sst_partial(const SstMachine& m, const Word& w);
// Throws UndefinedOutput when the final state has no output.
Word run_sst(const SstMachine& m, const Word& w);

// Reverse machine: x <- xc, y <- cy, output xy. Computes w·reverse(w).
SstMachine reverse_machine(const Word& alphabet);
// The two-state machine with separator sep (see corpus/charles.json).
SstMachine charles_machine(const Word& alphabet, char32_t sep);
// Single-state identity transducer over the alphabet.
SstMachine identity_machine(const Word& alphabet);

}  // namespace lsst

#endif  // LSST_SST_H
