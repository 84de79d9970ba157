#include "doctest.h"

#include "apn/gf2m.hpp"

using namespace apn;

namespace {

// Shift-and-add product reduced bit by bit, independent of the Field tables.
word_t schoolbook_mul(word_t a, word_t b, std::uint64_t modulus, unsigned m) {
  std::uint64_t acc = 0;
  for (unsigned i = 0; i < m; ++i) {
    if ((b >> i) & 1U) acc ^= std::uint64_t{a} << i;
  }
  for (int i = 2 * static_cast<int>(m) - 2; i >= static_cast<int>(m); --i) {
    if ((acc >> i) & 1U) acc ^= modulus << (i - static_cast<int>(m));
  }
  return static_cast<word_t>(acc);
}

bool brute_irreducible(std::uint64_t poly) {
  const int n = gf2_degree(poly);
  for (std::uint64_t d = 2; gf2_degree(d) <= n / 2; ++d) {
    std::uint64_t r = poly;
    while (gf2_degree(r) >= gf2_degree(d)) r ^= d << (gf2_degree(r) - gf2_degree(d));
    if (r == 0) return false;
  }
  return n >= 1;
}

}  // namespace

TEST_CASE("default moduli") {
  CHECK(Field::create(3)->modulus() == 0b1011);
  CHECK(Field::create(1)->modulus() == 0b11);
  CHECK(brute_irreducible(0b1011));
  for (unsigned m = 1; m <= 12; ++m) CHECK(brute_irreducible(Field::create(m)->modulus()));
}

TEST_CASE("modulus validation") {
  try {
    Field::create(4, 0b10100);
    FAIL("expected ReduciblePolynomial");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ReduciblePolynomial);
  }
  CHECK_THROWS_AS(Field::create(4, 0b1011), Error);
  CHECK_THROWS_AS(Field::create(0), Error);
  CHECK_THROWS_AS(Field::create(33), Error);
}

TEST_CASE("Rabin test agrees with trial division") {
  for (std::uint64_t p = 2; p < (1U << 11); ++p) CHECK(is_irreducible_gf2(p) == brute_irreducible(p));
}

TEST_CASE("F_8 examples") {
  auto f = Field::create(3);
  CHECK(f->mul(0b10, 0b10) == 0b100);
  CHECK(f->mul(0b100, 0b100) == 0b110);
  CHECK(f->inv(0b10) == 0b101);
  CHECK(f->mul(0b10, 0b101) == 1);
  CHECK(f->inv(1) == 1);
  CHECK_THROWS_AS(f->inv(0), Error);
  CHECK(f->trace(1) == 1);
  for (word_t a = 1; a < 8; ++a) CHECK(f->pow(a, 0) == 1);
}

TEST_CASE("multiplication matches school-book oracle") {
  for (unsigned m = 1; m <= 6; ++m) {
    auto f = Field::create(m);
    for (word_t a = 0; a < f->size(); ++a) {
      for (word_t b = 0; b < f->size(); ++b) {
        REQUIRE(f->mul(a, b) == schoolbook_mul(a, b, f->modulus(), m));
      }
    }
  }
}

TEST_CASE("wide fields use carry-less multiply") {
  for (unsigned m : {17U, 24U, 31U, 32U}) {
    auto f = Field::create(m);
    CHECK_FALSE(f->has_tables());
    std::uint64_t seed = 12345;
    for (int i = 0; i < 200; ++i) {
      seed = seed * 6364136223846793005ULL + 1442695040888963407ULL;
      const word_t a = static_cast<word_t>(seed >> 20) & f->mask();
      const word_t b = static_cast<word_t>(seed >> 7) & f->mask();
      CHECK(f->mul(a, b) == schoolbook_mul(a, b, f->modulus(), m));
      if (a != 0) CHECK(f->mul(a, f->inv(a)) == 1);
    }
    CHECK(f->pow(f->generator(), f->size() - 1) == 1);
  }
}

TEST_CASE("field laws") {
  for (unsigned m = 1; m <= 8; ++m) {
    auto f = Field::create(m);
    const word_t q = static_cast<word_t>(f->size());
    unsigned trace_ones = 0;
    for (word_t a = 0; a < q; ++a) {
      REQUIRE(f->pow(a, f->size()) == a);
      REQUIRE(f->sqrt(f->sqr(a)) == a);
      if (a != 0) REQUIRE(f->inv(f->inv(a)) == a);
      trace_ones += f->trace(a);
      word_t t = 0, y = a;
      for (unsigned i = 0; i < m; ++i, y = f->sqr(y)) t ^= y;
      REQUIRE(t == f->trace(a));
    }
    CHECK(trace_ones == q / 2);
    if (m <= 5) {
      for (word_t a = 0; a < q; ++a)
        for (word_t b = 0; b < q; ++b)
          for (word_t c = 0; c < q; ++c) REQUIRE(f->mul(a ^ b, c) == (f->mul(a, c) ^ f->mul(b, c)));
    }
  }
}

TEST_CASE("enumeration order") {
  auto f = Field::create(4);
  std::uint64_t expect = 0;
  for (auto a : f->elements()) CHECK(a == expect++);
  CHECK(expect == 16);
}

TEST_CASE("checked elements") {
  auto f8 = Field::create(3);
  auto f16 = Field::create(4);
  FieldElement x(f8, 2);
  CHECK((x * x.inv()).value() == 1);
  CHECK((x + x).is_zero());
  CHECK_THROWS_AS(x + FieldElement(f16, 2), Error);
  CHECK_THROWS_AS(FieldElement(f8, 8), Error);
}
