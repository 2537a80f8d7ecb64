#include <doctest.h>

#include <random>

#include "gen.h"
#include "lsst/error.h"
#include "lsst/io.h"

using namespace lsst;

namespace {

std::string corpus_text(const std::string& name) { return read_file(std::string(LSST_CORPUS_DIR) + "/" + name); }

}  // namespace

TEST_CASE("register words") {
  std::vector<std::string> regs{"x", "y1"};
  RegWord w = parse_reg_word("a$x b $y1\\$\\ ", regs);
  CHECK(w == RegWord{Sym::letter(U'a'), Sym::reg(0), Sym::letter(U'b'), Sym::reg(1), Sym::letter(U'$'),
                     Sym::letter(U' ')});
  CHECK(parse_reg_word(format_word(w, &regs), regs) == w);
  CHECK(parse_reg_word("", regs).empty());
  CHECK_THROWS_AS(parse_reg_word("$z", regs), ParseError);
  CHECK_THROWS_AS(parse_reg_word("a\\", regs), ParseError);
}

TEST_CASE("corpus machine files are the built-in machines") {
  CHECK(sst_from_json(corpus_text("reverse.json")) == reverse_machine(U"ab"));
  CHECK(sst_from_json(corpus_text("charles.json")) == charles_machine(U"abcd", U'‖'));
  CHECK(sst_from_json(corpus_text("identity.json")) == identity_machine(U"ab"));
  CHECK(brtt_to_json(brtt_from_json(corpus_text("condswap.json"))) == brtt_to_json(condswap_machine()));
  CHECK(brtt_to_json(brtt_from_json(corpus_text("mirror.json"))) == brtt_to_json(mirror_machine()));
  CHECK(machine_kind(corpus_text("branches.json")) == "nd-sst");
  CHECK(validate_nd_sst(nd_sst_from_json(corpus_text("branches.json"))).empty());
}

TEST_CASE("printing then parsing is the identity") {
  for (const char* name : {"reverse.json", "charles.json", "identity.json", "condswap.json", "mirror.json",
                           "branches.json"}) {
    CAPTURE(name);
    std::string text = corpus_text(name);
    std::string kind = machine_kind(text);
    if (kind == "sst") CHECK(sst_to_json(sst_from_json(text)) == text);
    else if (kind == "nd-sst") CHECK(nd_sst_to_json(nd_sst_from_json(text)) == text);
    else CHECK(brtt_to_json(brtt_from_json(text)) == text);
  }
  std::mt19937 rng(3);
  for (int k = 0; k < 200; ++k) {
    SstMachine m = gen::random_sst(rng, 3, 3, U"ab", U"a$b ");
    CHECK(sst_from_json(sst_to_json(m)) == m);
    NdSstMachine n = gen::random_nd_sst(rng, 3, 2, U"ab", U"ab");
    std::string text = nd_sst_to_json(n);
    CHECK(nd_sst_to_json(nd_sst_from_json(text)) == text);
  }
}

TEST_CASE("malformed machine files name the problem") {
  CHECK_THROWS_AS(sst_from_json("{"), ParseError);
  CHECK_THROWS_AS(sst_from_json("{\"states\": [\"q\"]}"), ParseError);
  std::string text = corpus_text("reverse.json");
  std::string bad = text;
  bad.replace(bad.find("\"next\": \"q\""), 11, "\"next\": \"p\"");
  try {
    sst_from_json(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("'p'") != std::string::npos);
  }
  bad = text;
  bad.replace(bad.find("\"letter\": \"b\""), 13, "\"letter\": \"a\"");
  CHECK_THROWS_AS(sst_from_json(bad), ParseError);
}
