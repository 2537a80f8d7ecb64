// Runs every acceptance criterion and prints one PASS/FAIL line for each.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gen.h"
#include "lsst/brtt.h"
#include "lsst/closure.h"
#include "lsst/compile.h"
#include "lsst/compose.h"
#include "lsst/forest.h"
#include "lsst/io.h"
#include "oracles.h"
#include "term_gen.h"

using namespace lsst;

namespace {

// Counts failed checks and keeps the first message.
struct Checker {
  long checks = 0;
  long failures = 0;
  std::string first;
  void operator()(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
};

int run_criterion(int n, const std::string& name, double limit_s, const std::function<void(Checker&)>& body) {
  Checker c;
  auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.failures++;
    if (c.first.empty()) c.first = std::string("exception: ") + e.what();
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = c.failures == 0 && s < limit_s;
  std::printf("%s %2d %-28s %8.3f s (limit %g s), %ld checks", ok ? "PASS" : "FAIL", n, name.c_str(), s, limit_s,
              c.checks);
  if (c.failures) std::printf(", %ld failed: %s", c.failures, c.first.c_str());
  else if (!ok) std::printf(", over the time limit");
  std::printf("\n");
  std::fflush(stdout);
  return ok ? 0 : 1;
}

std::string corpus_path(const std::string& name) { return std::string(LSST_CORPUS_DIR) + "/" + name; }

std::vector<std::string> corpus_terms() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(LSST_CORPUS_DIR))
    if (e.path().extension() == ".lam") out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

Word letters_of(const RankedAlphabet& a) {
  Word w;
  for (int i = 0; i < a.size(); ++i)
    if (a.rank(i) == 1) w += to_u32(a.letters[i]);
  return w;
}

void reverse_sst(Checker& check) {
  std::mt19937 rng(101);
  SstMachine m = reverse_machine(U"ab");
  for (int k = 0; k < 1000; ++k) {
    Word w = gen::random_word(rng, U"ab", 50);
    check(run_sst(m, w) == w + oracle::reversed(w), "reverse on " + to_utf8(w));
  }
}

void two_state_sst(Checker& check) {
  std::mt19937 rng(102);
  const char32_t sep = U'‖';
  SstMachine m = charles_machine(U"ab", sep);
  Word sigma = Word(U"ab") + sep;
  for (int k = 0; k < 1000; ++k) {
    Word w = gen::random_word(rng, sigma, 30);
    check(run_sst(m, w) == oracle::two_state_closed_form(w, sep), "two-state machine on " + to_utf8(w));
  }
  check(run_sst(m, U"") == U"", "empty word");
  check(run_sst(m, U"ab‖b") == U"", "odd separator count");
}

void compile_terms(Checker& check) {
  std::mt19937 rng(103);
  for (const char* name : {"reverse.lam", "charles.lam"}) {
    TermFile f = load_term_file(corpus_path(name));
    Word sigma = letters_of(*f.sigma);
    SstMachine m = compile_string_term(f.term, *f.kappa, sigma, letters_of(*f.gamma));
    check(validate_sst(m).empty(), std::string(name) + " compiles to a valid machine");
    for (int k = 0; k < 200; ++k) {
      Word w = gen::random_word(rng, sigma, 12);
      Word expect = tree_as_string(apply_definable(f.term, string_as_tree(w), *f.sigma, *f.gamma));
      check(run_sst(m, w) == expect, std::string(name) + " on " + to_utf8(w));
    }
  }
}

void composition(Checker& check) {
  std::mt19937 rng(104);
  for (int pair = 0; pair < 20; ++pair) {
    SstMachine f = gen::random_sst(rng, 3, 3, U"ab", U"ab");
    SstMachine g = gen::random_sst(rng, 3, 3, U"ab", U"ab");
    LazyComposition fg(f, g);
    for (int k = 0; k < 500; ++k) {
      Word w = gen::random_word(rng, U"ab", 12);
      check(fg.run(w) == run_sst(f, run_sst(g, w)), "pair " + std::to_string(pair) + " on " + to_utf8(w));
    }
  }
}

void determinization(Checker& check) {
  std::mt19937 rng(105);
  auto words = gen::all_strings(U"ab", 6);
  for (int k = 0; k < 50; ++k) {
    NdSstMachine m = gen::random_nd_sst(rng, 3, 2, U"ab", U"ab");
    SstMachine det = determinize(m);
    check(validate_sst(det).empty(), "determinized machine is valid");
    for (const Word& w : words) {
      auto all = run_nd_sst(m, w);
      auto got = run_sst_partial(det, w);
      check(got.has_value() == !all.empty(), "domain at " + to_utf8(w));
      if (got) check(std::find(all.begin(), all.end(), *got) != all.end(), "output at " + to_utf8(w));
    }
  }
}

RegWord rw(std::initializer_list<Sym> s) { return RegWord(s); }

void internal_homset(Checker& check) {
  std::mt19937 rng(106);
  for (int k = 0; k < 10000; ++k) {
    int t = static_cast<int>(rng() % 3), r = static_cast<int>(rng() % 4), s = static_cast<int>(rng() % 3);
    RT f = gen::random_rt(rng, t + r, s);
    Curried c = curry_sr(f, t);
    check(compose_rt(tensor_rt(c.h, identity_rt(r)), eval_sr(c.shape)) == f, "ev after curry on " + format_rt(f));
  }
  // zaxabyaa: context x; arguments y, z, u; result registers r, s
  auto L = [](char c) { return Sym::letter(static_cast<char32_t>(c)); };
  auto R = [](int i) { return Sym::reg(i); };
  RT f{4, {rw({R(2), L('a'), R(0), L('a'), L('b'), R(1), L('a'), L('a')}), rw({L('b'), L('a'), L('b')})}};
  Curried c = curry_sr(f, 1);
  check(c.shape.target == std::vector<int>{0, 0, -1}, "argument targets");
  check(c.shape.rank == std::vector<int>{1, 0, -1}, "argument order in the fiber of r");
  check(c.h.cod() == 4, "four curried registers");
  if (c.h.cod() == 4) {
    check(c.h.assign[0].empty(), "r holds ε");
    check(c.h.assign[1] == rw({L('b'), L('a'), L('b')}), "s holds bab");
    check(c.h.assign[2] == rw({L('a'), L('a')}), "the y slot holds aa");
    check(c.h.assign[3] == rw({L('a'), R(0), L('a'), L('b')}), "the z slot holds axab");
  }
  RT ev = eval_sr(c.shape);
  check(ev.dom == 7 && ev.assign.size() == 2, "evaluation shape");
  if (ev.assign.size() == 2) check(ev.assign[0] == rw({R(0), R(5), R(3), R(4), R(2)}), "r ← r z ẑ y ŷ");
  check(compose_rt(tensor_rt(c.h, identity_rt(3)), ev) == f, "zaxabyaa recomposes");
}

void monoidal_closure(Checker& check) {
  std::mt19937 rng(107);
  for (int k = 0; k < 1000; ++k) {
    Obj c = gen::random_obj(rng), a = gen::random_obj(rng), b = gen::random_obj(rng);
    Mor f = gen::random_mor(rng, obj_tensor({c, a}), b);
    Mor lf = curry(f, c, a);
    check(mor_equal(uncurry(lf), f), "uncurry after curry");
    Mor g = gen::random_mor(rng, c, obj_lin(a, b));
    check(mor_equal(curry(uncurry(g), c, a), g), "curry after uncurry");
    Obj d = gen::random_obj(rng);
    Mor h = gen::random_mor(rng, d, c);
    check(mor_equal(curry(mor_compose(mor_tensor(h, mor_id(a)), f), d, a), mor_compose(h, lf)), "naturality");
  }
}

void normalization(Checker& check) {
  auto both = [&](const Term& t, const std::string& what) {
    Term l = normalize(t, kDefaultFuel, Strategy::Leftmost);
    Term r = normalize(t, kDefaultFuel, Strategy::Rightmost);
    check(check_normal(l), what + ": leftmost result is normal");
    check(check_normal(r), what + ": rightmost result is normal");
    check(cc_equal(l, r), what + ": strategies agree");
  };
  for (const auto& name : corpus_terms()) both(load_term_file(corpus_path(name)).term, name);
  std::mt19937 rng(108);
  gen::TermGenerator g(rng, {"a", "b"}, true);
  for (int k = 0; k < 10000; ++k) {
    gen::TypedTerm t = g.closed(30);
    both(t.term, format_term(t.term));
  }
}

void church(Checker& check) {
  std::mt19937_64 rng(109);
  for (const char* alpha : {"a/2 b/1 c/0", "n/3 l/0 m/0", "u/1 z/0", "a/1 b/1 eps/0"}) {
    RankedAlphabet r = parse_ranked_alphabet(alpha);
    for (int k = 0; k < 1000; ++k) {
      Tree t = oracle::random_tree(rng, r, 8);
      check(decode_tree(encode_tree(t, r), r) == t, std::string(alpha) + ": " + format_tree(t));
    }
  }
}

void brtt(Checker& check) {
  SurBrtt swap = condswap_machine();
  check(validate_brtt(swap).empty(), "conditional swap is valid");
  ConflictRelation xy;
  xy.add("x", "y");
  for (const auto& [key, rule] : swap.delta)
    check(check_single_use(rule.assign, xy), "single use with x≍y");
  check(!check_copyless_brtt(swap), "conditional swap is not copyless");
  std::mt19937_64 rng(110);
  for (int k = 0; k < 500; ++k) {
    Tree t = oracle::random_tree(rng, swap.input, 8);
    check(to_utf8(tree_as_string(run_brtt(swap, t))) == oracle::conditional_swap(t), "swap on " + format_tree(t));
  }
  SurBrtt mirror = mirror_machine();
  check(validate_brtt(mirror).empty(), "mirror is valid");
  for (int k = 0; k < 500; ++k) {
    Tree t = oracle::random_tree(rng, mirror.input, 8);
    check(run_brtt(mirror, t) == Tree{"a", {t, oracle::mirrored(t)}}, "mirror on " + format_tree(t));
  }
}

void shapes(Checker& check) {
  std::mt19937_64 rng(111);
  for (const auto& name : corpus_terms()) {
    TermFile f = load_term_file(corpus_path(name));
    Shape sh = extract_shape(f.term, *f.sigma, *f.gamma, *f.kappa);
    Term g = reconstruct(sh, *f.sigma, *f.gamma);
    check_definable_type(g, *f.kappa, *f.sigma, *f.gamma);
    for (int k = 0; k < 100; ++k) {
      Tree t = oracle::random_tree(rng, *f.sigma, 7);
      check(apply_definable(g, t, *f.sigma, *f.gamma) == apply_definable(f.term, t, *f.sigma, *f.gamma),
            name + " on " + format_tree(t));
    }
  }
}

}  // namespace

int main() {
  int failed = 0;
  failed += run_criterion(1, "reverse SST", 1, reverse_sst);
  failed += run_criterion(2, "two-state SST", 1, two_state_sst);
  failed += run_criterion(3, "term compiler", 30, compile_terms);
  failed += run_criterion(4, "composition", 120, composition);
  failed += run_criterion(5, "determinization", 120, determinization);
  failed += run_criterion(6, "internal homset", 10, internal_homset);
  failed += run_criterion(7, "monoidal closure", 30, monoidal_closure);
  failed += run_criterion(8, "normalization", 120, normalization);
  failed += run_criterion(9, "Church bijection", 5, church);
  failed += run_criterion(10, "SUR-BRTT", 10, brtt);
  failed += run_criterion(11, "shape extraction", 60, shapes);
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
