#include <doctest.h>

#include <random>

#include "gen.h"
#include "lsst/compile.h"
#include "lsst/error.h"
#include "lsst/io.h"
#include "oracles.h"
#include "term_gen.h"

using namespace lsst;

namespace {

TermFile corpus(const std::string& name) { return load_term_file(std::string(LSST_CORPUS_DIR) + "/" + name); }

// The letters of a string alphabet, without eps.
Word letters_of(const RankedAlphabet& a) {
  Word w;
  for (int i = 0; i < a.size(); ++i)
    if (a.rank(i) == 1) w += to_u32(a.letters[i]);
  return w;
}

Word definable(const TermFile& f, const Word& w) {
  return tree_as_string(apply_definable(f.term, string_as_tree(w), *f.sigma, *f.gamma));
}

SstMachine compile_file(const TermFile& f) {
  return compile_string_term(f.term, *f.kappa, letters_of(*f.sigma), letters_of(*f.gamma));
}

bool agree(const Mor& f, const Mor& g) {
  if (!obj_equal(f.dom, g.dom) || !obj_equal(f.cod, g.cod)) return false;
  return mor_equal(f, g, 5000);
}

}  // namespace

TEST_CASE("type denotations") {
  CHECK(obj_equal(denote_type(parse_type("1")), obj_unit()));
  CHECK(obj_equal(denote_type(parse_type("o + o")), obj_plus({obj_base(1), obj_base(1)})));
  CHECK(summands(denote_type(parse_type("o + o"))).size() == 2);
  CHECK(obj_equal(denote_type(parse_type("(o -o o) & 1")),
                  obj_with({obj_lin(obj_base(1), obj_base(1)), obj_unit()})));
  CHECK(obj_equal(denote_type(parse_type("T")), obj_top()));
  CHECK(obj_equal(denote_type(parse_type("0")), obj_zero()));
  CHECK_THROWS_AS(denote_type(parse_type("o -> o")), NotPurelyLinear);
}

TEST_CASE("term denotations") {
  RankedAlphabet g = string_alphabet(U"ab");
  Obj o = obj_base(1);
  // λx.x is the name of the identity
  CHECK(agree(denote_term(parse_term("\\x. x"), g, {}, parse_type("o -o o")), name_of(mor_id(o))));
  // a letter prepends itself
  Mor b = denote_term(parse_term("b"), g);
  CHECK(agree(b, name_of(mor_embed(RT{1, {RegWord{Sym::letter(U'b'), Sym::reg(0)}}}))));
  Mor word = denote_term(parse_term("a (b eps)"), g);
  CHECK(interpret_sr(word.at(Idx{}).comps.at(0).second) == U"ab");
  // the output map λp. π₁(p) ε of a register-with-emptiness: read the register
  Type k = parse_type("(o -o o) & 1");
  Mor out = denote_term(parse_term("\\p. p1 p eps"), g, {}, t_lin(k, t_base()));
  Mor reg = denote_term(parse_term("<\\x. a (b x), ()>"), g, {}, k);
  CHECK(interpret_sr(mor_compose(reg, uncurry(out)).at(Idx{}).comps.at(0).second) == U"ab");
  // linear context in the given order
  Mor swap = denote_term(parse_term("y * x"), g, {{"x", t_base()}, {"y", parse_type("1")}});
  CHECK(agree(swap, mor_permute({o, obj_unit()}, {1, 0})));
  CHECK_THROWS_AS(denote_term(parse_term("\\!x. x"), g), NotPurelyLinear);
}

TEST_CASE("denotations of additive terms") {
  RankedAlphabet g = string_alphabet(U"ab");
  Type k = parse_type("o + o");
  Mor left = denote_term(parse_term("in1 (a eps)"), g, {}, k);
  MorAt at = left.at(Idx{});
  CHECK(interpret_sr(at.comps.at(0).second) == U"a");
  // case swaps the summands and prepends b on the right
  Mor sw = denote_term(parse_term("\\s. case s of { x. in2 x | y. in1 (b y) }"), g, {}, t_lin(k, k));
  Mor r = mor_compose(left, uncurry(sw));
  Mor expect = denote_term(parse_term("in2 (a eps)"), g, {}, k);
  CHECK(agree(r, expect));
  // ⊤ absorbs unused variables
  Mor top = denote_term(parse_term("\\x. <x, <>>"), g, {}, parse_type("o -o o & T"));
  CHECK(obj_equal(top.cod, obj_lin(obj_base(1), obj_with({obj_base(1), obj_top()}))));
  Mor pr = denote_term(parse_term("\\x. p1 <x, <>>"), g, {}, parse_type("o -o o"));
  CHECK(agree(pr, name_of(mor_id(obj_base(1)))));
}

TEST_CASE("compiled corpus machines agree with the definable function") {
  std::mt19937 rng(31);
  for (const char* name : {"reverse.lam", "charles.lam", "constant.lam", "identity.lam", "wrap.lam"}) {
    CAPTURE(name);
    TermFile f = corpus(name);
    SstMachine m = compile_file(f);
    CHECK(validate_sst(m).empty());
    Word sigma = letters_of(*f.sigma);
    for (int k = 0; k < 100; ++k) {
      Word w = gen::random_word(rng, sigma, 10);
      CHECK(run_sst(m, w) == definable(f, w));
    }
  }
}

TEST_CASE("compiled reverse and two-state machines against closed forms") {
  std::mt19937 rng(37);
  SstMachine rev = compile_file(corpus("reverse.lam"));
  for (int k = 0; k < 200; ++k) {
    Word w = gen::random_word(rng, U"ab", 12);
    CHECK(run_sst(rev, w) == oracle::reversed(w));
  }
  SstMachine ch = compile_file(corpus("charles.lam"));
  const char32_t sep = U'‖';
  for (int k = 0; k < 200; ++k) {
    Word w = gen::random_word(rng, Word(U"ab") + sep, 12);
    CHECK(run_sst(ch, w) == oracle::two_state_closed_form(oracle::reversed(w), sep));
  }
  SstMachine c = compile_file(corpus("constant.lam"));
  for (int k = 0; k < 20; ++k) CHECK(run_sst(c, gen::random_word(rng, U"ab", 8)).empty());
}

TEST_CASE("denotations are invariant under normalization") {
  std::mt19937 rng(47);
  gen::TermGenerator g(rng, {"a", "b"}, false);
  RankedAlphabet ga = string_alphabet(U"ab");
  for (int k = 0; k < 1000; ++k) {
    gen::TypedTerm t = g.closed(30);
    Term n = normalize(t.term);
    CAPTURE(format_term(t.term));
    CHECK(agree(denote_term(t.term, ga, {}, t.type), denote_term(n, ga, {}, t.type)));
  }
}

TEST_CASE("the step orientation: post-composition passes, pre-composition does not") {
  TermFile f = corpus("reverse.lam");
  Word sigma = letters_of(*f.sigma);
  RankedAlphabet ga = *f.gamma;
  Shape shape = extract_shape(f.term, *f.sigma, ga, *f.kappa);
  GenSst<OplusWithSr> post = string_term_machine(shape, *f.kappa, sigma, letters_of(ga));
  // the same machine with h ↦ d_a ∘ h
  GenSst<OplusWithSr> pre = post;
  EndoMonoid endo = endo_monoid(denote_type(*f.kappa));
  for (int a = 0; a < static_cast<int>(sigma.size()); ++a) {
    Mor point = denote_term(shape.step[a], ga, {}, t_lin(*f.kappa, *f.kappa));
    pre.delta[0][a].second = mor_compose(mor_tensor(mor_id(endo.carrier), point), endo.mu);
  }
  SstMachine mpost = lower_to_sst(post, sigma, letters_of(ga));
  SstMachine mpre = lower_to_sst(pre, sigma, letters_of(ga));
  int post_ok = 0, pre_ok = 0;
  for (const Word& w : gen::all_strings(sigma, 5)) {
    post_ok += run_sst(mpost, w) == definable(f, w);
    pre_ok += run_sst(mpre, w) == definable(f, w);
  }
  CHECK(post_ok == static_cast<int>(gen::all_strings(sigma, 5).size()));
  CHECK(pre_ok < post_ok);
}
