#include <doctest.h>

#include <random>

#include "gen.h"
#include "lsst/error.h"
#include "lsst/forest.h"
#include "lsst/sst.h"

using namespace lsst;

namespace {

// Equality of morphisms: exhaustive when the domain is small, else sampled.
bool agree(const Mor& f, const Mor& g, std::mt19937& rng) {
  if (!obj_equal(f.dom, g.dom) || !obj_equal(f.cod, g.cod)) return false;
  try {
    return mor_equal(f, g, 3000);
  } catch (const IndexMismatch&) {
  }
  for (int k = 0; k < 200; ++k) {
    Idx i = gen::random_summand(rng, f.dom);
    if (!(f.at(i) == g.at(i))) return false;
  }
  return true;
}

std::vector<int> outputs(const Forest& f) {
  std::vector<int> out;
  for (int v = 0; v < f.size(); ++v)
    if (f.output[v]) out.push_back(v);
  return out;
}

int roots(const Forest& f) {
  int n = 0;
  for (int v = 0; v < f.size(); ++v) n += f.parent[v] < 0;
  return n;
}

int find_output(const Forest& g, int label) {
  for (int w = 0; w < g.size(); ++w)
    if (g.output[w] && g.label[w] == label) return w;
  return -1;
}

}  // namespace

TEST_CASE("forest types") {
  Forest f;
  f.add(-1, 0, 1, true);
  CHECK(obj_equal(forest_type(f), obj_unit()));
  f.add(0, 1, 2, true);
  CHECK(obj_equal(forest_type(f), obj_lin(obj_base(1), obj_base(2))));
  // two roots, five outputs, five edges: a five-factor tensor
  Forest g;
  int t = g.add(-1, 0, 1, false);
  int s = g.add(-1, 1, 1, false);
  int u = g.add(t, 2, 1, false);
  g.add(u, 3, 1, true);
  g.add(u, 4, 1, true);
  g.add(t, 5, 0, true);
  g.add(s, 6, 2, true);
  g.add(s, 7, 1, true);
  CHECK(forest_type(g)->kind == ObjKind::Tensor);
  CHECK(forest_type(g)->parts.size() == 6);
  CHECK(g.edges().size() == 6);
}

TEST_CASE("prune and contract preconditions") {
  Forest f;
  f.add(-1, 0, 1, false);
  f.add(0, 1, 1, false);
  f.add(1, 2, 1, true);
  f.add(0, 3, 1, false);
  CHECK_THROWS_AS(prune(f, 2), NotPrunable);
  CHECK_THROWS_AS(prune(f, 1), NotPrunable);
  CHECK_THROWS_AS(contract(f, 0), NotContractible);
  CHECK_THROWS_AS(contract(f, 2), NotContractible);
  ForestMap p = prune(f, 3);
  CHECK(p.forest.size() == 3);
  ForestMap c = contract(p.forest, 1);
  CHECK(c.forest.size() == 2);
  CHECK(c.forest.parent[1] == 0);
  CHECK(is_normal(c.forest));
}

TEST_CASE("semantics of small forests") {
  std::mt19937 rng(3);
  // single edge: identity on the slot
  Forest f;
  f.add(-1, 0, 2, false);
  f.add(0, 1, 1, true);
  CHECK(agree(forest_semantics(f, 1), mor_id(edge_type(f, 1)), rng));
  // output at a root: the name of the identity
  Forest r;
  r.add(-1, 0, 1, true);
  CHECK(agree(forest_semantics(r, 0), name_of(mor_id(obj_base(1))), rng));
  // chains agree with composing concrete transitions
  for (int it = 0; it < 200; ++it) {
    int n0 = rng() % 3, n1 = rng() % 3, n2 = rng() % 3, n3 = rng() % 3;
    RT t1 = gen::random_rt(rng, n0, n1), t2 = gen::random_rt(rng, n1, n2), t3 = gen::random_rt(rng, n2, n3);
    Forest c;
    c.add(-1, 0, n0, false);
    c.add(0, 1, n1, false);
    c.add(1, 2, n2, false);
    c.add(2, 3, n3, true);
    Mor point = mor_tensor({name_of(mor_embed(t1)), name_of(mor_embed(t2)), name_of(mor_embed(t3))});
    Mor lhs = mor_compose(point, forest_semantics(c, 3));
    Mor rhs = name_of(mor_embed(compose_rt(compose_rt(t1, t2), t3)));
    CHECK(agree(lhs, rhs, rng));
    // contraction keeps the semantics
    ForestMap k = contract(c, 1);
    CHECK(agree(mor_compose(k.map, forest_semantics(k.forest, 2)), forest_semantics(c, 3), rng));
  }
}

TEST_CASE("prune and contract commute with semantics") {
  std::mt19937 rng(5);
  for (int it = 0; it < 150; ++it) {
    Forest f = gen::random_forest(rng);
    for (int v = 0; v < f.size(); ++v) {
      bool p = prunable(f, v), c = contractible(f, v);
      if (!p && !c) continue;
      ForestMap step = p ? prune(f, v) : contract(f, v);
      CHECK(obj_equal(step.map.cod, forest_type(step.forest)));
      for (int o : outputs(f)) {
        int o2 = step.image[o];
        REQUIRE(step.forest.output[o2]);
        CHECK(agree(mor_compose(step.map, forest_semantics(step.forest, o2)), forest_semantics(f, o), rng));
      }
    }
  }
}

TEST_CASE("normal forms are independent of the strategy") {
  std::mt19937 rng(7);
  for (int it = 0; it < 150; ++it) {
    Forest f = gen::random_forest(rng);
    ForestMap l = normalize_forest(f, ForestStrategy::Leftmost);
    ForestMap r = normalize_forest(f, ForestStrategy::Rightmost);
    CHECK(is_normal(l.forest));
    CHECK(l.forest == r.forest);
    CHECK(agree(l.map, r.map, rng));
    int outs = static_cast<int>(outputs(l.forest).size());
    CHECK(l.forest.size() <= 2 * (roots(l.forest) + outs));
    // normal input: identity
    ForestMap again = normalize_forest(l.forest);
    CHECK(again.forest == l.forest);
    CHECK(agree(again.map, mor_id(forest_type(l.forest)), rng));
  }
}

TEST_CASE("one-step critical pairs join") {
  std::mt19937 rng(9);
  for (int it = 0; it < 60; ++it) {
    Forest f = gen::random_forest(rng);
    std::vector<int> redexes;
    for (int v = 0; v < f.size(); ++v)
      if (prunable(f, v) || contractible(f, v)) redexes.push_back(v);
    for (int v : redexes) {
      for (int w : redexes) {
        if (v >= w) continue;
        ForestMap a = prunable(f, v) ? prune(f, v) : contract(f, v);
        ForestMap b = prunable(f, w) ? prune(f, w) : contract(f, w);
        ForestMap na = normalize_forest(a.forest), nb = normalize_forest(b.forest);
        CHECK(na.forest == nb.forest);
        CHECK(agree(mor_compose(a.map, na.map), mor_compose(b.map, nb.map), rng));
      }
    }
  }
}

TEST_CASE("canonical forms") {
  std::mt19937 rng(11);
  for (int it = 0; it < 150; ++it) {
    Forest f = gen::random_forest(rng);
    ForestMap c = canonicalize(f);
    CHECK(obj_equal(c.map.cod, forest_type(c.forest)));
    for (int o : outputs(f)) {
      int w = c.image[o];
      REQUIRE(c.forest.output[w]);
      CHECK(c.forest.label[w] == f.label[o]);
      CHECK(agree(mor_compose(c.map, forest_semantics(c.forest, w)), forest_semantics(f, o), rng));
    }
    // canonical forms are fixed points
    ForestMap cc = canonicalize(c.forest);
    CHECK(forest_key(cc.forest) == forest_key(c.forest));
  }
}

TEST_CASE("composing forests") {
  std::mt19937 rng(13);
  for (int it = 0; it < 100; ++it) {
    Forest f;
    int r = f.add(-1, 0, rng() % 2, false);
    int m = f.add(r, 1, rng() % 2, false);
    f.add(m, 2, rng() % 2, true);
    f.add(m, 3, rng() % 2, true);
    f.add(r, 4, rng() % 2, rng() % 2);
    Forest g;
    int g2 = g.add(-1, 2, f.regs[2], false);
    g.add(g2, 5, rng() % 2, true);
    g.add(g2, 6, rng() % 2, true);
    int g3 = g.add(-1, 3, f.regs[3], false);
    g.add(g3, 7, rng() % 2, true);
    ForestMap c = compose_forests(f, g);
    CHECK(c.forest.size() == f.size() + g.size() - 2);
    for (int o : outputs(g)) {
      int glue = find_output(f, g.label[forest_root(g, o)]);
      int co = -1;
      for (int w = 0; w < c.forest.size(); ++w)
        if (c.forest.output[w] && c.forest.label[w] == g.label[o]) co = w;
      REQUIRE(co >= 0);
      Mor lhs = mor_compose(c.map, forest_semantics(c.forest, co));
      Mor rhs = mor_compose(mor_tensor(forest_semantics(f, glue), forest_semantics(g, o)),
                            internal_compose(obj_base(f.regs[0]), obj_base(f.regs[glue]), obj_base(g.regs[o])));
      CHECK(agree(lhs, rhs, rng));
    }
    ForestMap n = normalize_forest(c.forest);
    CHECK(is_normal(n.forest));
    CHECK(n.forest.size() <= 2 * (roots(n.forest) + static_cast<int>(outputs(n.forest).size())));
  }
  // a depth-0 copy on the outputs leaves a forest unchanged
  Forest f;
  f.add(-1, 0, 1, false);
  f.add(0, 1, 1, true);
  f.add(0, 2, 1, true);
  Forest copy;
  copy.add(-1, 1, 1, true);
  copy.add(-1, 2, 1, true);
  CHECK(compose_forests(f, copy).forest == f);
  Forest bad;
  bad.add(-1, 9, 1, true);
  CHECK_THROWS_AS(compose_forests(f, bad), LabelMismatch);
  CHECK(forest_dot(f).find("doublecircle") != std::string::npos);
}

TEST_CASE("uniformizing deterministic machines") {
  for (const auto& machine : {reverse_machine(U"ab"), charles_machine(U"ab", U'|')}) {
    SdmSst<SrCat> d = gen_as_sdm(sst_as_gen(machine));
    SdmSst<SrCat> u = uniformize(sdm_as_nd(d));
    std::mt19937 rng(17);
    for (int it = 0; it < 200; ++it) {
      Word w;
      int len = rng() % 12;
      for (int k = 0; k < len; ++k) w += machine.alphabet_in[rng() % machine.alphabet_in.size()];
      auto idx = letter_indices(machine.alphabet_in, w);
      auto expect = run_sdm_sst(d, idx);
      auto got = run_sdm_sst(u, idx);
      REQUIRE(got.has_value() == expect.has_value());
      if (got) CHECK(interpret_sr(*got) == interpret_sr(*expect));
    }
  }
}

TEST_CASE("uniformization chooses the least branch") {
  // two states reading any letter; state 0 writes a, state 1 writes b
  NdSdmSst<SrCat> m;
  m.memory = {1, 1};
  m.letters = 1;
  m.initial = {{1, constant_rt({U""})}, {0, constant_rt({U""})}};
  RT wa{1, {{Sym::reg(0), Sym::letter(U'a')}}}, wb{1, {{Sym::reg(0), Sym::letter(U'b')}}};
  m.delta = {{{0, 0, wa}, {1, 1, wb}}};
  m.output = {identity_rt(1), identity_rt(1)};
  SdmSst<SrCat> u = uniformize(m);
  for (int n = 0; n < 6; ++n) {
    auto got = run_sdm_sst(u, std::vector<int>(n, 0));
    REQUIRE(got);
    CHECK(interpret_sr(*got) == Word(n, U'a'));
  }
  // without an output on state 0 the other branch is taken
  m.output[0] = std::nullopt;
  u = uniformize(m);
  CHECK(interpret_sr(*run_sdm_sst(u, {0, 0, 0})) == U"bbb");
  // a branch that dies: state 2 accepts but has no transitions
  NdSdmSst<SrCat> d;
  d.memory = {1, 0};
  d.letters = 2;
  d.initial = {{0, constant_rt({U""})}, {1, RT{}}};
  d.delta = {{{0, 0, wa}}, {{1, 1, RT{}}}};
  d.output = {identity_rt(1), constant_rt({U"z"})};
  u = uniformize(d);
  for (const auto& w : gen::all_words(2, 5)) {
    auto nd = run_nd_sdm(d, w);
    auto got = run_sdm_sst(u, w);
    CHECK(got.has_value() == !nd.empty());
  }
}

TEST_CASE("uniformization of random nondeterministic machines") {
  std::mt19937 rng(19);
  auto words = gen::all_words(2, 6);
  for (int it = 0; it < 40; ++it) {
    NdSdmSst<SrCat> m = gen::random_nd(rng);
    SdmSst<SrCat> u = uniformize(m);
    for (int q = 0; q < u.states(); ++q)
      for (int a = 0; a < u.letters; ++a) CHECK(check_copyless(u.delta[q][a].second));
    for (const auto& w : words) {
      auto nd = run_nd_sdm(m, w);
      auto got = run_sdm_sst(u, w);
      REQUIRE(got.has_value() == !nd.empty());
      if (got) CHECK(std::find(nd.begin(), nd.end(), *got) != nd.end());
    }
  }
}

TEST_CASE("collapsing &-memory machines") {
  // the two-state machine with its single register set viewed as a one-factor &
  SstMachine ch = charles_machine(U"ab", U'|');
  SdmSst<SrCat> d = gen_as_sdm(sst_as_gen(ch));
  SdmSst<WithCat<SrCat>> w;
  w.letters = d.letters;
  w.initial = d.initial;
  for (int q = 0; q < d.states(); ++q) {
    w.memory.push_back({d.memory[q]});
    std::vector<std::pair<int, WithCat<SrCat>::Mor>> row;
    for (const auto& [next, t] : d.delta[q]) row.push_back({next, WithCat<SrCat>::embed(t)});
    w.delta.push_back(row);
    w.output.push_back(d.output[q] ? std::optional(WithCat<SrCat>::embed(*d.output[q])) : std::nullopt);
  }
  w.init = WithCat<SrCat>::embed(d.init);
  SdmSst<SrCat> c = collapse_with(w);
  std::mt19937 rng(23);
  for (int it = 0; it < 200; ++it) {
    Word s;
    int len = rng() % 14;
    for (int k = 0; k < len; ++k) s += U"ab|"[rng() % 3];
    auto idx = letter_indices(ch.alphabet_in, s);
    auto got = run_sdm_sst(c, idx);
    REQUIRE(got);
    CHECK(interpret_sr(*got) == run_sst(ch, s));
  }

  // two factors: x accumulates a's, y accumulates b's; the output picks
  // x in state 0 and y in state 1; letter 2 toggles the state
  SdmSst<WithCat<SrCat>> two;
  two.letters = 3;
  two.memory = {{1, 1}, {1, 1}};
  RT id1 = identity_rt(1);
  RT ap{1, {{Sym::reg(0), Sym::letter(U'a')}}}, bp{1, {{Sym::reg(0), Sym::letter(U'b')}}};
  auto with = [](std::vector<std::pair<int, RT>> at) { return WithCat<SrCat>::Mor{{1, 1}, {1, 1}, at}; };
  for (int q = 0; q < 2; ++q)
    two.delta.push_back({{q, with({{0, ap}, {1, id1}})}, {q, with({{0, id1}, {1, bp}})}, {1 - q, with({{1, id1}, {0, id1}})}});
  two.init = WithCat<SrCat>::Mor{{0}, {1, 1}, {{0, constant_rt({U""})}, {0, constant_rt({U"-"})}}};
  two.output = {WithCat<SrCat>::Mor{{1, 1}, {1}, {{0, id1}}}, WithCat<SrCat>::Mor{{1, 1}, {1}, {{1, id1}}}};
  SdmSst<SrCat> tc = collapse_with(two);
  for (const auto& s : gen::all_words(3, 6)) {
    auto direct = run_sdm_sst(two, s);
    auto got = run_sdm_sst(tc, s);
    REQUIRE(direct);
    REQUIRE(got);
    CHECK(interpret_sr(*got) == interpret_sr(direct->at[0].second));
  }
}

TEST_CASE("determinizing nondeterministic SSTs") {
  // two branches from one state: append a, or prepend b
  NdSstMachine m;
  m.states = {"q"};
  m.registers = {"x"};
  m.alphabet_in = U"c";
  m.alphabet_out = U"ab";
  m.initial = {{0, RT{0, {{}}}}};
  m.delta = {{{{0, RT{1, {{Sym::reg(0), Sym::letter(U'a')}}}}, {0, RT{1, {{Sym::letter(U'b'), Sym::reg(0)}}}}}}};
  m.output = {identity_rt(1)};
  CHECK(validate_nd_sst(m).empty());
  CHECK(run_nd_sst(m, U"cc") == std::vector<Word>{U"aa", U"ba", U"bb"});
  SstMachine d = determinize(m);
  CHECK(validate_sst(d).empty());
  for (const Word& w : gen::all_strings(U"c", 6)) {
    auto all = run_nd_sst(m, w);
    CHECK(std::find(all.begin(), all.end(), run_sst(d, w)) != all.end());
  }

  std::mt19937 rng(29);
  for (int it = 0; it < 30; ++it) {
    NdSstMachine r = gen::random_nd_sst(rng, 3, 2, U"ab", U"ab");
    REQUIRE(validate_nd_sst(r).empty());
    SstMachine det = determinize(r);
    CHECK(validate_sst(det).empty());
    for (const Word& w : gen::all_strings(U"ab", 6)) {
      auto all = run_nd_sst(r, w);
      auto got = run_sst_partial(det, w);
      REQUIRE(got.has_value() == !all.empty());
      if (got) CHECK(std::find(all.begin(), all.end(), *got) != all.end());
    }
  }
}
