#include <doctest.h>

#include <algorithm>
#include <random>

#include "gen.h"
#include "lsst/error.h"
#include "lsst/streaming.h"

using namespace lsst;

namespace {

using Oplus = OplusCat<SrCat>;

Word run_sr(const GenSst<SrCat>& g, const std::vector<int>& w) { return interpret_sr(*run_gen_sst(g, w)); }

Word run_oplus(const GenSst<Oplus>& g, const std::vector<int>& w) {
  auto r = run_gen_sst(g, w);
  REQUIRE(r);
  REQUIRE(r->at.size() == 1);
  return interpret_sr(r->at[0].second);
}

SdmSst<Oplus> embed_sdm(const SdmSst<SrCat>& m) {
  SdmSst<Oplus> e;
  e.letters = m.letters;
  e.initial = m.initial;
  for (int q = 0; q < m.states(); ++q) {
    e.memory.push_back(Oplus::singleton(m.memory[q]));
    std::vector<std::pair<int, Oplus::Mor>> row;
    for (const auto& [next, t] : m.delta[q]) row.push_back({next, Oplus::embed(t)});
    e.delta.push_back(row);
    e.output.push_back(m.output[q] ? std::optional(Oplus::embed(*m.output[q])) : std::nullopt);
  }
  e.init = Oplus::embed(m.init);
  return e;
}

}  // namespace

TEST_CASE("Sr machines run as their register-transition semantics") {
  std::mt19937 rng(31);
  for (int k = 0; k < 100; ++k) {
    SstMachine m = gen::random_sst(rng, 3, 3, U"ab", U"xyz");
    GenSst<SrCat> g = sst_as_gen(m);
    for (int it = 0; it < 20; ++it) {
      Word w = gen::random_word(rng, U"ab", 10);
      CHECK(run_sr(g, letter_indices(m.alphabet_in, w)) == run_sst(m, w));
    }
  }
  CHECK(run_sr(sst_as_gen(reverse_machine(U"ab")), {0, 0, 1}) == U"aabbaa");
  CHECK_THROWS_AS(letter_indices(U"ab", U"ac"), DomainMismatch);
}

TEST_CASE("a deterministic automaton as a finite-set machine") {
  // parity of a's: memory {even, odd}, output is the identity on the memory
  GenSst<FinSetCat> dfa;
  dfa.memory = 2;
  dfa.letters = 2;
  dfa.delta = {{{0, FinSetCat::Mor{2, 2, {1, 0}}}, {0, FinSetCat::id(2)}}};
  dfa.init = FinSetCat::Mor{1, 2, {0}};
  dfa.output = {FinSetCat::id(2)};
  for (const auto& w : gen::all_words(2, 7)) {
    auto r = run_gen_sst(dfa, w);
    REQUIRE(r);
    CHECK(r->map.at(0) == static_cast<int>(std::count(w.begin(), w.end(), 0) % 2));
  }
}

TEST_CASE("finite-set tensors and permutations") {
  FinSetCat::Mor f{2, 3, {2, 0}}, g{3, 2, {1, 1, 0}};
  FinSetCat::Mor fg = FinSetCat::tensor_mor(f, g);
  CHECK(fg.dom == 6);
  CHECK(fg.cod == 6);
  CHECK(fg.map == std::vector<int>{5, 5, 4, 1, 1, 0});
  // swapping the factors twice is the identity
  FinSetCat::Mor s = FinSetCat::permute({2, 3}, {1, 0});
  FinSetCat::Mor t = FinSetCat::permute({3, 2}, {1, 0});
  CHECK(FinSetCat::compose(s, t) == FinSetCat::id(6));
  CHECK_THROWS_AS(FinSetCat::compose(f, f), DomainMismatch);
}

TEST_CASE("state-dependent memory as a single state over the ⊕-completion") {
  std::mt19937 rng(37);
  for (int k = 0; k < 60; ++k) {
    SstMachine m = gen::random_sst(rng, 3, 2, U"ab", U"xy");
    SdmSst<SrCat> d = gen_as_sdm(sst_as_gen(m));
    GenSst<Oplus> single = sdm_to_oplus(d, 1);
    CHECK(single.states == 1);
    SdmSst<SrCat> back = oplus_to_sdm(single);
    GenSst<SrCat> collapsed = collapse_oplus(single);
    GenSst<Oplus> coproduct = single_state_via_coproducts(embed_sdm(d), Oplus::singleton(1));
    for (int it = 0; it < 20; ++it) {
      Word w = gen::random_word(rng, U"ab", 9);
      auto idx = letter_indices(m.alphabet_in, w);
      Word expect = run_sst(m, w);
      CHECK(run_oplus(single, idx) == expect);
      CHECK(interpret_sr(*run_sdm_sst(back, idx)) == expect);
      CHECK(run_sr(collapsed, idx) == expect);
      CHECK(run_oplus(coproduct, idx) == expect);
    }
  }
}

TEST_CASE("capabilities a base category lacks are reported") {
  SdmSst<FinSetCat> d;
  d.memory = {1};
  d.letters = 1;
  d.delta = {{{0, FinSetCat::id(1)}}};
  d.init = FinSetCat::id(1);
  d.output = {FinSetCat::id(1)};
  CHECK_THROWS_AS(single_state_via_coproducts(d, 1), MissingCapability);
  CHECK_THROWS_AS(collapse_oplus(sdm_to_oplus(d, 1)), MissingCapability);
  SdmSst<SrCat> partial = gen_as_sdm(sst_as_gen(reverse_machine(U"a")));
  partial.output[0].reset();
  CHECK_THROWS_AS(sdm_to_oplus(partial, 1), MissingCapability);
}

TEST_CASE("setting morphisms transport runs") {
  std::mt19937 rng(41);
  // a letter-to-letter homomorphism is a functor Sr(Γ) → Sr(Γ) fixing objects
  auto h = [](char32_t c) { return c == U'x' ? U'y' : U'x'; };
  SettingMorphism<SrCat, SrCat> swap{[](int n) { return n; }, [&](const RT& t) { return map_letters(t, h); },
                                     identity_rt(0), identity_rt(1)};
  // the embedding of Sr into its ⊕-completion
  SettingMorphism<SrCat, Oplus> into{[](int n) { return Oplus::singleton(n); },
                                     [](const RT& t) { return Oplus::embed(t); }, Oplus::id({0}), Oplus::id({1})};
  for (int k = 0; k < 50; ++k) {
    SstMachine m = gen::random_sst(rng, 3, 2, U"ab", U"xy");
    GenSst<SrCat> g = sst_as_gen(m);
    GenSst<SrCat> g2 = apply_setting_morphism(swap, g);
    GenSst<Oplus> g3 = apply_setting_morphism(into, g);
    for (int it = 0; it < 20; ++it) {
      Word w = gen::random_word(rng, U"ab", 9);
      auto idx = letter_indices(m.alphabet_in, w);
      Word expect = run_sst(m, w);
      Word mapped = expect;
      std::transform(mapped.begin(), mapped.end(), mapped.begin(), h);
      CHECK(run_sr(g2, idx) == mapped);
      CHECK(run_oplus(g3, idx) == expect);
    }
  }
}

TEST_CASE("nondeterministic runs") {
  std::mt19937 rng(43);
  for (int k = 0; k < 40; ++k) {
    SstMachine m = gen::random_sst(rng, 3, 2, U"ab", U"xy");
    NdSdmSst<SrCat> nd = sdm_as_nd(gen_as_sdm(sst_as_gen(m)));
    for (int it = 0; it < 10; ++it) {
      Word w = gen::random_word(rng, U"ab", 8);
      auto outs = run_nd_sdm(nd, letter_indices(m.alphabet_in, w));
      REQUIRE(outs.size() == 1);
      CHECK(interpret_sr(outs[0]) == run_sst(m, w));
    }
    nd.initial.clear();
    CHECK(run_nd_sdm(nd, {0, 1}).empty());
    CHECK(run_nd_sdm(nd, {}).empty());
  }
  // two equal runs count once
  NdSdmSst<SrCat> twice;
  twice.memory = {1, 1};
  twice.letters = 1;
  twice.initial = {{0, constant_rt({U""})}, {1, constant_rt({U""})}};
  twice.delta = {{{0, 0, identity_rt(1)}, {1, 1, identity_rt(1)}}};
  twice.output = {identity_rt(1), identity_rt(1)};
  CHECK(run_nd_sdm(twice, {0, 0}).size() == 1);
}
