#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "icf/algebra.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

using namespace icf;

namespace {

// Independent word model: a basis word is its digit string. Used as an
// oracle for the packed (first,length) representation.
std::vector<std::string> all_words() {
  std::vector<std::string> out;
  for (int f = 0; f < 4; ++f)
    for (int len = 1; len <= 7; ++len) {
      std::string w;
      int zeros = 0;
      for (int k = 0; k < len; ++k) {
        int d = (f + k) % 4;
        if (d == 0) ++zeros;
        w += char('0' + d);
      }
      if (zeros <= 1) out.push_back(w);
    }
  return out;
}

std::string mul_words(const std::string& a, const std::string& b) {
  if ((a.back() - '0' + 1) % 4 != b.front() - '0') return "";
  std::string c = a + b;
  int zeros = 0;
  for (char ch : c) zeros += ch == '0';
  if (zeros > 1 || c.size() > 7) return "";
  return c;
}

} // namespace

TEST_CASE("basis enumeration") {
  CHECK(all_words().size() == 22);
  std::set<int> seen;
  for (const auto& w : all_words()) {
    int idx = parse_word(w);
    REQUIRE(idx >= 2);
    CHECK(word_digits(idx) == w);
    seen.insert(idx);
  }
  CHECK(seen.size() == 22);

  int hat = 0;
  for (int i = 0; i < kBasisCount; ++i) hat += basis_is_hat(i);
  CHECK(hat == 8);

  CHECK(word_digits(R1) == "1");
  CHECK(word_digits(R12) == "12");
  CHECK(word_digits(R123) == "123");
  CHECK(parse_word("13") == -1);
  CHECK(parse_word("231") == -1);
  CHECK(parse_word("12301") == word_index(1, 5));
}

TEST_CASE("idempotents of words") {
  CHECK(basis_left(R1) == Idem::Dot);
  CHECK(basis_right(R1) == Idem::Circ);
  CHECK(basis_left(R2) == Idem::Circ);
  CHECK(basis_right(R2) == Idem::Dot);
  CHECK(basis_left(R3) == Idem::Dot);
  CHECK(basis_right(R3) == Idem::Circ);
  CHECK(basis_left(R12) == Idem::Dot);
  CHECK(basis_right(R12) == Idem::Dot);
  CHECK(basis_left(R23) == Idem::Circ);
  CHECK(basis_right(R23) == Idem::Circ);
  CHECK(basis_left(R123) == Idem::Dot);
  CHECK(basis_right(R123) == Idem::Circ);
  int r30 = parse_word("30");
  CHECK(basis_left(r30) == Idem::Dot);
  CHECK(basis_right(r30) == Idem::Dot);
}

TEST_CASE("multiplication against the string oracle") {
  auto words = all_words();
  for (const auto& a : words)
    for (const auto& b : words) {
      int p = mul_basis(parse_word(a), parse_word(b));
      std::string q = mul_words(a, b);
      if (q.empty())
        CHECK(p == -1);
      else
        CHECK(p == parse_word(q));
    }
}

TEST_CASE("hat relations") {
  auto e = [](int i) { return Alg::unit(i); };
  CHECK(mul(e(R1), e(R2)) == e(R12));
  CHECK(mul(e(R2), e(R3)) == e(R23));
  CHECK(mul(e(R12), e(R3)) == e(R123));
  CHECK(mul(e(R1), e(R23)) == e(R123));
  CHECK(mul(e(R2), e(R1)).is_zero());
  CHECK(mul(e(R3), e(R2)).is_zero());
  CHECK(mul(e(R1), e(R1)).is_zero());
  CHECK(mul(e(R3), e(R123)).is_zero());
  CHECK(mul(Alg::iota(Idem::Dot), e(R1)) == e(R1));
  CHECK(mul(e(R1), Alg::iota(Idem::Circ)) == e(R1));
  CHECK(mul(e(R1), Alg::iota(Idem::Dot)).is_zero());
}

TEST_CASE("curvature element") {
  Alg u = alg_U();
  CHECK(u.popcount() == 4);
  CHECK(mul(u, u).is_zero());

  Alg udot = mul(u, Alg::iota(Idem::Dot));
  CHECK(udot == Alg::unit(word_index(1, 4)) + Alg::unit(word_index(3, 4)));

  CHECK(mul(u, Alg::unit(R1)) == Alg::unit(word_index(1, 5)));

  for (int i = 0; i < kBasisCount; ++i)
    CHECK(mul(u, Alg::unit(i)) == mul(Alg::unit(i), u));
}

TEST_CASE("grading group") {
  Gr g1 = gr_basis(R1), g2 = gr_basis(R2), g3 = gr_basis(R3);
  CHECK(gr_mul(g1, g2) == gr_basis(R12));
  CHECK(gr_mul(g2, g3) == gr_basis(R23));
  CHECK(gr_mul(gr_basis(R12), g3) == gr_basis(R123));
  CHECK(gr_mul(g1, gr_basis(R23)) == gr_basis(R123));

  std::mt19937 rng(7);
  std::vector<Gr> pool = {g1, g2, g3, kLambda, gr_inv(g1), gr_inv(g3)};
  auto rand_g = [&] {
    Gr g = kGrId;
    for (int k = 0; k < 6; ++k) g = gr_mul(g, pool[rng() % pool.size()]);
    return g;
  };
  for (int t = 0; t < 200; ++t) {
    Gr a = rand_g(), b = rand_g(), c = rand_g();
    CHECK(gr_mul(gr_mul(a, b), c) == gr_mul(a, gr_mul(b, c)));
    CHECK(gr_mul(a, gr_inv(a)) == kGrId);
    CHECK(gr_mul(a, kLambda) == gr_mul(kLambda, a));
  }
}

TEST_CASE("mod 2 collapse identities") {
  std::mt19937 rng(11);
  std::vector<Gr> pool = {gr_basis(R1), gr_basis(R2), gr_basis(R3), kLambda};
  auto rand_g = [&] {
    Gr g = kGrId;
    int n = 1 + rng() % 7;
    for (int k = 0; k < n; ++k) {
      Gr p = pool[rng() % pool.size()];
      g = gr_mul(g, rng() % 2 ? p : gr_inv(p));
    }
    return g;
  };
  for (int t = 0; t < 500; ++t) {
    Gr g = rand_g();
    for (bool plus : {false, true}) {
      CHECK(gr_mod2(gr_mul(kLambda, g), plus) == (gr_mod2(g, plus) + 1) % 2);
    }
    CHECK(gr_mod2(gr_mul(gr_basis(R1), g), true) == gr_mod2(g, false));
    CHECK(gr_mod2(gr_mul(gr_basis(R2), g), false) == (gr_mod2(g, true) + 1) % 2);
    CHECK(gr_mod2(gr_mul(gr_basis(R3), g), true) == gr_mod2(g, false));
  }
}
