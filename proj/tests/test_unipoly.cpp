#include "doctest.h"

#include <random>

#include "apn/unipoly.hpp"

using namespace apn;

namespace {

UniPoly U(const FieldPtr& f, std::vector<word_t> c) { return UniPoly(f, std::move(c)); }

UniPoly random_uni(const FieldPtr& f, std::mt19937_64& rng, int deg) {
  std::vector<word_t> c(static_cast<std::size_t>(deg) + 1);
  for (auto& x : c) x = static_cast<word_t>(rng()) & f->mask();
  if (c.back() == 0) c.back() = 1;
  return U(f, c);
}

// Brute-force irreducibility: no monic divisor of degree <= deg/2 over a tiny field.
bool brute_irreducible(const UniPoly& p) {
  const FieldPtr& f = p.field();
  const int n = p.degree();
  const std::uint64_t q = f->size();
  for (int d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= q;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<word_t> c(static_cast<std::size_t>(d) + 1);
      std::uint64_t t = idx;
      for (int i = 0; i < d; ++i, t /= q) c[static_cast<std::size_t>(i)] = static_cast<word_t>(t % q);
      c.back() = 1;
      if ((p % U(f, c)).is_zero()) return false;
    }
  }
  return n >= 1;
}

UniPoly rebuild(const UniFactorization& fac, const FieldPtr& f) {
  UniPoly r = UniPoly::constant(f, fac.unit);
  for (const auto& [g, e] : fac.factors)
    for (unsigned i = 0; i < e; ++i) r = r * g;
  return r;
}

}  // namespace

TEST_CASE("small factorizations over F_2") {
  auto f = Field::create(1);
  auto a = uni_factor(U(f, {0, 1, 1}));
  REQUIRE(a.factors.size() == 2);
  CHECK(a.factors[0].poly == U(f, {0, 1}));
  CHECK(a.factors[1].poly == U(f, {1, 1}));
  auto b = uni_factor(U(f, {1, 0, 1}));
  REQUIRE(b.factors.size() == 1);
  CHECK(b.factors[0].poly == U(f, {1, 1}));
  CHECK(b.factors[0].multiplicity == 2);
  auto c = uni_factor(U(f, {1, 1, 0, 1}));
  REQUIRE(c.factors.size() == 1);
  CHECK(c.factors[0].multiplicity == 1);
  CHECK(is_irreducible(U(f, {1, 1, 0, 1})));
}

TEST_CASE("division identities") {
  auto f = Field::create(5);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const UniPoly a = random_uni(f, rng, 9), b = random_uni(f, rng, 4);
    const auto [qt, r] = divmod(a, b);
    CHECK(qt * b + r == a);
    CHECK(r.degree() < b.degree());
    const auto e = ext_gcd(a, b);
    CHECK(e.s * a + e.t * b == e.g);
    CHECK((a % e.g).is_zero());
    CHECK(exact_div(a * b, b) == a);
  }
  CHECK_THROWS_AS(exact_div(U(f, {1, 0, 1}), U(f, {0, 1})), Error);
}

TEST_CASE("factorization reproduces input with irreducible factors") {
  for (unsigned m : {1U, 2U, 3U}) {
    auto f = Field::create(m);
    std::mt19937_64 rng(100 + m);
    for (int i = 0; i < 60; ++i) {
      UniPoly p = random_uni(f, rng, 1 + static_cast<int>(rng() % 6));
      if (i % 3 == 0) p = p * p * random_uni(f, rng, 2);
      const auto fac = uni_factor(p, rng());
      CHECK(rebuild(fac, f) == p);
      for (const auto& [g, e] : fac.factors) {
        CHECK(g.lead() == 1);
        CHECK(brute_irreducible(g));
        CHECK(is_irreducible(g));
      }
    }
  }
}

TEST_CASE("factor order is independent of seed") {
  auto f = Field::create(4);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const UniPoly p = random_uni(f, rng, 12);
    const auto a = uni_factor(p, 1), b = uni_factor(p, 999);
    REQUIRE(a.factors.size() == b.factors.size());
    for (std::size_t k = 0; k < a.factors.size(); ++k) CHECK(a.factors[k].poly == b.factors[k].poly);
  }
}

TEST_CASE("roots") {
  auto f = Field::create(4);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 30; ++i) {
    const UniPoly p = random_uni(f, rng, 7);
    std::vector<word_t> brute;
    for (word_t a = 0; a < 16; ++a)
      if (p.eval(a) == 0) brute.push_back(a);
    CHECK(roots(p, rng()) == brute);
  }
}

TEST_CASE("field embeddings are ring homomorphisms") {
  for (auto [k, n] : {std::pair{1U, 4U}, {2U, 4U}, {3U, 6U}, {4U, 8U}, {4U, 20U}}) {
    auto from = Field::create(k), to = Field::create(n);
    FieldEmbedding emb(from, to);
    for (word_t a = 0; a < from->size(); ++a) {
      for (word_t b = 0; b < from->size(); ++b) {
        REQUIRE(emb(from->mul(a, b)) == to->mul(emb(a), emb(b)));
        REQUIRE(emb(a ^ b) == (emb(a) ^ emb(b)));
      }
    }
    CHECK(emb(1) == 1);
  }
}
