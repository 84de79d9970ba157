#include "doctest.h"

#include <random>

#include "apn/diffanal.hpp"
#include "apn/funcrep.hpp"

using namespace apn;

namespace {

PolyFunc F(const FieldPtr& f, const std::string& s) { return parse_function(f, s); }

// delta straight from the definition, evaluating f at every point.
unsigned brute_delta(const PolyFunc& f) {
  const std::uint64_t q = f.field()->size();
  unsigned best = 0;
  for (std::uint64_t a = 1; a < q; ++a) {
    for (std::uint64_t b = 0; b < q; ++b) {
      unsigned n = 0;
      for (std::uint64_t x = 0; x < q; ++x) {
        const auto X = static_cast<word_t>(x), A = static_cast<word_t>(a);
        if ((f.eval(X ^ A) ^ f.eval(X)) == b) ++n;
      }
      best = std::max(best, n);
    }
  }
  return best;
}

PolyFunc random_func(const FieldPtr& f, std::mt19937_64& rng, unsigned max_deg) {
  PolyFunc::Terms t;
  for (unsigned e = 0; e <= max_deg; ++e) t[e] = static_cast<word_t>(rng()) & f->mask();
  return PolyFunc(f, t);
}

}  // namespace

TEST_CASE("normalize") {
  auto f = Field::create(4);
  CHECK(normalize(F(f, "x^3 + x^2 + 1")) == F(f, "x^3"));
  CHECK(normalize(F(f, "x^6 + x^5 + x^4")) == F(f, "x^6 + x^5"));
  try {
    normalize(F(f, "x^8 + x^2 + x"));
    FAIL("expected BecameZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BecameZero);
  }
}

TEST_CASE("q-affine") {
  auto f = Field::create(3);
  CHECK(is_q_affine(F(f, "x^4 + x + 1")));
  CHECK_FALSE(is_q_affine(F(f, "x^3")));
  CHECK(is_q_affine(PolyFunc(f, {})));
  CHECK(is_q_affine(UniPoly(f, {1, 1, 0, 0, 1})));
}

TEST_CASE("reduction modulo x^q + x") {
  auto f = Field::create(3);
  CHECK(F(f, "x^8") == F(f, "x"));
  CHECK(F(f, "x^9") == F(f, "x^2"));
  CHECK(F(f, "x^7 + x^14") == PolyFunc(f, {}));
  for (word_t x = 0; x < 8; ++x) CHECK(F(f, "x^15").eval(x) == f->pow(x, 15));
}

TEST_CASE("affine transform") {
  auto f8 = Field::create(3);
  CHECK(affine_transform(F(f8, "x^3"), 1, 0, 1) == F(f8, "x^3"));
  CHECK_THROWS_AS(affine_transform(F(f8, "x^3"), 0, 1, 1), Error);
  CHECK_THROWS_AS(affine_transform(F(f8, "x^3"), 1, 1, 0), Error);
  // a5^-6 f(a5 x) = x^6 + x^5 for f = x^6 + a5 x^5.
  for (word_t a5 = 1; a5 < 8; ++a5) {
    const PolyFunc f = PolyFunc(f8, {{6, 1}, {5, a5}});
    CHECK(affine_transform(f, a5, 0, f8->inv(f8->pow(a5, 6))) == F(f8, "x^6 + x^5"));
  }
  // Value-level check of c f(a x + b) and composition.
  std::mt19937_64 rng(2);
  auto f = Field::create(4);
  for (int i = 0; i < 30; ++i) {
    const PolyFunc g = random_func(f, rng, 15);
    const word_t a1 = 1 + static_cast<word_t>(rng() % 15), b1 = static_cast<word_t>(rng() % 16), c1 = 1 + static_cast<word_t>(rng() % 15);
    const word_t a2 = 1 + static_cast<word_t>(rng() % 15), b2 = static_cast<word_t>(rng() % 16), c2 = 1 + static_cast<word_t>(rng() % 15);
    const PolyFunc h = affine_transform(g, a1, b1, c1);
    for (word_t x = 0; x < 16; ++x) CHECK(h.eval(x) == f->mul(c1, g.eval(f->mul(a1, x) ^ b1)));
    // Applying (a1,b1,c1) then (a2,b2,c2) equals (a1 a2, a1 b2 + b1, c1 c2).
    const PolyFunc twice = affine_transform(h, a2, b2, c2);
    const PolyFunc once = affine_transform(g, f->mul(a1, a2), f->mul(a1, b2) ^ b1, f->mul(c1, c2));
    CHECK(twice == once);
  }
}

TEST_CASE("delta is invariant under the equivalences") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    auto f = Field::create(2 + static_cast<unsigned>(rng() % 4));
    const std::uint64_t q = f->size();
    const PolyFunc g = random_func(f, rng, static_cast<unsigned>(q - 1));
    const word_t a = 1 + static_cast<word_t>(rng() % (q - 1)), b = static_cast<word_t>(rng() % q),
                 c = 1 + static_cast<word_t>(rng() % (q - 1));
    const unsigned d = brute_delta(g);
    CHECK(differential_spectrum(affine_transform(g, a, b, c)).delta == d);
    CHECK(differential_spectrum(frobenius_twist(g)).delta == d);
    if (!is_q_affine(g)) CHECK(differential_spectrum(normalize(g)).delta == d);
  }
}

TEST_CASE("catalogue exponents") {
  CHECK(known_apn_exponent(ApnFamily::Gold, 5, 1) == 3);
  CHECK(known_apn_exponent(ApnFamily::Welch, 5) == 7);
  CHECK(known_apn_exponent(ApnFamily::Dobbertin, 5) == 29);
  CHECK(known_apn_exponent(ApnFamily::Dobbertin, 10) == 339);
  CHECK(known_apn_exponent(ApnFamily::Kasami, 5, 2) == 13);
  CHECK(known_apn_exponent(ApnFamily::Niho, 5) == 5);
  CHECK(known_apn_exponent(ApnFamily::Niho, 7) == 39);
  CHECK(known_apn_exponent(ApnFamily::Inverse, 5) == 30);
  try {
    known_apn_exponent(ApnFamily::Inverse, 4);
    FAIL("expected InvalidParameters");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParameters);
  }
  CHECK_THROWS_AS(known_apn_exponent(ApnFamily::Gold, 4, 2), Error);
  CHECK_THROWS_AS(known_apn_exponent(ApnFamily::Gold, 4), Error);
  CHECK_THROWS_AS(known_apn_exponent(ApnFamily::Dobbertin, 6), Error);
  CHECK(parse_family("welch") == ApnFamily::Welch);
  CHECK_FALSE(parse_family("bogus").has_value());
}

TEST_CASE("parser") {
  auto f = Field::create(5);
  CHECK(F(f, "x^7") == PolyFunc::monomial(f, 7));
  CHECK(F(f, "3*x^2 + 0x1f") == PolyFunc(f, {{2, 3}, {0, 31}}));
  const std::map<std::string, word_t> named{{"a", 5}, {"b", 7}};
  CHECK(parse_function(f, "x^9 + a*x^6 + b*x^3", named) == PolyFunc(f, {{9, 1}, {6, 5}, {3, 7}}));
  CHECK(parse_function(f, "a^2*x^3", named) == PolyFunc(f, {{3, f->mul(5, 5)}}));
  for (const char* bad : {"x^^", "", "x +", "32*x", "c*x", "x^3 + A", "x**2", "x^3 ; x"}) {
    try {
      parse_function(f, bad, named);
      FAIL("expected ParseError for " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
  const PolyExpr fam = parse_poly_expr(f, "x^9 + A*x^6 + A^2*x^3 + B*x^5");
  CHECK(fam.placeholders == std::vector<char>{'A', 'B'});
  const word_t vals[2] = {6, 0};
  CHECK(instantiate(f, fam, vals) == PolyFunc(f, {{9, 1}, {6, 6}, {3, f->mul(6, 6)}}));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 30; ++i) {
    const PolyFunc g = random_func(f, rng, 40);
    CHECK(F(f, g.to_string()) == g);
  }
}
