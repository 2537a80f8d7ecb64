#ifndef LSST_CHURCH_H
#define LSST_CHURCH_H

#include <map>
#include <string>
#include <vector>

#include "lsst/lambda.h"
#include "lsst/text.h"

namespace lsst {

// Letters in a fixed order; arity[i] lists the child labels of letters[i].
struct RankedAlphabet {
  std::vector<std::string> letters;
  std::vector<std::vector<std::string>> arity;

  int size() const { return static_cast<int>(letters.size()); }
  int index_of(const std::string& letter) const;  // -1 if absent
  int rank(int i) const { return static_cast<int>(arity[i].size()); }
  bool operator==(const RankedAlphabet&) const = default;
};

// Name of the nullary end-of-string letter.
inline constexpr const char* kEndLetter = "eps";

// Σ as a unary alphabet: one unary letter per character, then eps.
RankedAlphabet string_alphabet(const Word& sigma);
// "a/2 b/2 c/0" or "a(l,r) c()" style description.
RankedAlphabet parse_ranked_alphabet(const std::string& text);
std::string format_ranked_alphabet(const RankedAlphabet& a);

struct Tree {
  std::string label;
  std::vector<Tree> kids;  // ordered as the letter's arity
  bool operator==(const Tree&) const = default;
};

int tree_size(const Tree& t);
int tree_depth(const Tree& t);
// s-expression form a(b(c),c); nullary letters print bare.
std::string format_tree(const Tree& t);
Tree parse_tree(const std::string& text);
void check_tree(const Tree& t, const RankedAlphabet& a);  // throws NotAStringTree on mismatch

Tree string_as_tree(const Word& w);
Word tree_as_string(const Tree& t);  // throws NotAStringTree

// Treety_Σ: one nonlinear argument o ⊸ … ⊸ o per letter, result o.
Type tree_type(const RankedAlphabet& a);
// A variable name usable for letter i (the letter itself when it is an identifier).
std::string letter_variable(const RankedAlphabet& a, int i);
// Γ̃: the output letters as nonlinear constants.
TypingContext constants_context(const RankedAlphabet& a);

Term encode_tree(const Tree& t, const RankedAlphabet& a);
Tree decode_tree(const Term& t, const RankedAlphabet& a, long fuel = kDefaultFuel);

// Checks f : Treety_Σ[κ] ⊸ Treety_Γ.
void check_definable_type(const Term& f, const Type& kappa, const RankedAlphabet& sigma, const RankedAlphabet& gamma);
// decode(normalize(f · encode(t))); the type of f is not rechecked.
Tree apply_definable(const Term& f, const Tree& t, const RankedAlphabet& sigma, const RankedAlphabet& gamma,
                     long fuel = kDefaultFuel);

// f ≈ λs. λ!b₁…λ!b_k. o (s d_{a₁} … d_{a_n}), with o and d_a closed over Γ̃.
struct Shape {
  Term output;             // o : κ ⊸ o
  std::vector<Term> step;  // d_a per input letter, in alphabet order
};

Shape extract_shape(const Term& f, const RankedAlphabet& sigma, const RankedAlphabet& gamma, const Type& kappa,
                    long fuel = kDefaultFuel);
Term reconstruct(const Shape& s, const RankedAlphabet& sigma, const RankedAlphabet& gamma);

}  // namespace lsst

#endif  // LSST_CHURCH_H
