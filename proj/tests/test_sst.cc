#include "doctest.h"
#include "lsst/error.h"
#include "lsst/sst.h"

using namespace lsst;

TEST_CASE("reverse machine doubles a word with its mirror") {
  SstMachine m = reverse_machine(U"ab");
  CHECK(validate_sst(m).empty());
  CHECK(run_sst(m, U"") == U"");
  CHECK(run_sst(m, U"aab") == U"aabbaa");
}

TEST_CASE("charles machine on a small word") {
  SstMachine m = charles_machine(U"abcd", U'|');
  CHECK(validate_sst(m).empty());
  CHECK(run_sst(m, U"ab|c|d") == U"cab");
  CHECK(run_sst(m, U"ab") == U"");
  CHECK(run_sst(m, U"ab|c") == U"");
}

TEST_CASE("compose_rt agrees with sequential application") {
  // t: x <- xa, y <- b ; u: z <- yx
  RT t{2, {{Sym::reg(0), Sym::letter(U'a')}, {Sym::letter(U'b')}}};
  RT u{2, {{Sym::reg(1), Sym::reg(0)}}};
  RT c = compose_rt(t, u);
  Tuple x{U"p", U"q"};
  CHECK(apply_rt(c, x) == apply_rt(u, apply_rt(t, x)));
  CHECK(apply_rt(c, x) == Tuple{U"bpa"});
  CHECK(check_copyless(c));
  CHECK_THROWS_AS(compose_rt(u, t), DomainMismatch);
}

TEST_CASE("copyless check and discarded registers") {
  RT dup{1, {{Sym::reg(0), Sym::reg(0)}}};
  CHECK_FALSE(check_copyless(dup));
  RT drop{3, {{Sym::reg(2)}}};
  CHECK(check_copyless(drop));
  CHECK(discarded_registers(drop) == std::vector<int>{0, 1});
}

TEST_CASE("permutation and tensor") {
  RT p = permutation_rt({1, 0});
  CHECK(apply_rt(p, {U"x", U"y"}) == Tuple{U"y", U"x"});
  RT t = tensor_rt(identity_rt(1), constant_rt({U"c"}));
  CHECK(t.dom == 1);
  CHECK(apply_rt(t, {U"z"}) == Tuple{U"z", U"c"});
}
