#include "doctest.h"

#include <random>

#include "apn/bivariate.hpp"

using namespace apn;

namespace {

TriPoly P(const FieldPtr& f, const std::string& s) { return TriPoly::parse(f, s); }

// (x0^d + x1^d + x2^d + (x0+x1+x2)^d) / triple product, built by plain expansion.
TriPoly phi_d(const FieldPtr& f, unsigned d) {
  const TriPoly x0 = TriPoly::var(f, 0), x1 = TriPoly::var(f, 1), x2 = TriPoly::var(f, 2);
  const TriPoly num = x0.pow(d) + x1.pow(d) + x2.pow(d) + (x0 + x1 + x2).pow(d);
  return tp_exact_divide(num, triple_product(f));
}

TriPoly random_bi(const FieldPtr& f, std::mt19937_64& rng, int deg, int terms) {
  TriPoly p(f);
  for (int i = 0; i < terms; ++i) {
    Monomial m;
    const int a = static_cast<int>(rng() % static_cast<unsigned>(deg + 1));
    m.e[0] = static_cast<std::uint16_t>(a);
    m.e[1] = static_cast<std::uint16_t>(rng() % static_cast<unsigned>(deg - a + 1));
    p.add_term(m, static_cast<word_t>(rng()) & f->mask());
  }
  if (p.is_zero()) p = TriPoly::constant(f, 1);
  return p;
}

TriPoly rebuild(const BiFactorization& fac, const FieldPtr& f) {
  TriPoly r = TriPoly::constant(f, fac.unit);
  for (const auto& [g, e] : fac.factors) r = r * g.pow(e);
  return r;
}

// Irreducibility by exhaustive search for a factor of lower degree over a tiny field.
bool has_split(const TriPoly& p) {
  const FieldPtr& f = p.field();
  const int D = p.total_degree();
  for (int d = 1; d <= D / 2; ++d) {
    std::vector<Monomial> monos;
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) {
        Monomial m;
        m.e[0] = static_cast<std::uint16_t>(a);
        m.e[1] = static_cast<std::uint16_t>(b);
        monos.push_back(m);
      }
    const std::uint64_t q = f->size();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < monos.size(); ++i) total *= q;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
      TriPoly g(f);
      std::uint64_t t = idx;
      for (const auto& m : monos) {
        g.add_term(m, static_cast<word_t>(t % q));
        t /= q;
      }
      if (g.total_degree() < 1) continue;
      try {
        tp_exact_divide(p, g);
        return true;
      } catch (const NotDivisibleError&) {
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("resultant examples") {
  auto f = Field::create(1);
  const UniPoly r = bi_resultant(P(f, "x0 + x1"), P(f, "x0*x1 + 1"), 0);
  CHECK(r == UniPoly(f, {1, 0, 1}));
  CHECK(bi_resultant_sylvester(P(f, "x0 + x1"), P(f, "x0*x1 + 1"), 0) == r);
}

TEST_CASE("resultant by interpolation matches the Sylvester determinant") {
  for (unsigned m : {1U, 3U}) {
    auto f = Field::create(m);
    std::mt19937_64 rng(21 + m);
    for (int i = 0; i < 25; ++i) {
      const TriPoly a = random_bi(f, rng, 5, 7), b = random_bi(f, rng, 4, 6);
      for (int var : {0, 1}) CHECK(bi_resultant(a, b, var) == bi_resultant_sylvester(a, b, var));
    }
  }
}

TEST_CASE("resultant vanishes at shared roots") {
  auto f = Field::create(4);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) {
    const TriPoly a = random_bi(f, rng, 4, 6), b = random_bi(f, rng, 3, 5);
    const UniPoly r = bi_resultant(a, b, 1);
    for (word_t u0 = 0; u0 < 16; ++u0) {
      bool common = false;
      for (word_t v0 = 0; v0 < 16; ++v0) {
        const word_t pt[2] = {u0, v0};
        if (a.eval(pt) == 0 && b.eval(pt) == 0) common = true;
      }
      if (common) CHECK(r.eval(u0) == 0);
    }
  }
}

TEST_CASE("gcd and squarefreeness") {
  auto f = Field::create(1);
  CHECK_FALSE(bi_squarefree(P(f, "x0^2 + x1^2")));
  CHECK(bi_squarefree(P(f, "x0*x1 + 1")));
  CHECK(bi_gcd(phi_d(f, 7).substitute(2, 1), phi_d(f, 13).substitute(2, 1)).is_constant());
  CHECK_THROWS_AS(bi_gcd(phi_d(f, 7), phi_d(f, 13)), Error);
}

TEST_CASE("gcd recovers a planted common factor") {
  auto f = Field::create(3);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 30; ++i) {
    const TriPoly g = random_bi(f, rng, 3, 4), a = random_bi(f, rng, 3, 4), b = random_bi(f, rng, 3, 4);
    const TriPoly d = bi_gcd(g * a, g * b);
    CHECK((d.is_zero() ? false : true));
    tp_exact_divide(g * a, d);
    tp_exact_divide(g * b, d);
    tp_exact_divide(d, bi_gcd(g, g));
  }
}

TEST_CASE("factor examples") {
  auto f = Field::create(1);
  const auto a = bi_factor(P(f, "x0^2 + x1^2 + x0 + x1"));
  REQUIRE(a.factors.size() == 2);
  CHECK(a.factors[0].poly == P(f, "x0 + x1"));
  CHECK(a.factors[1].poly == P(f, "x0 + x1 + 1"));

  const auto b = bi_factor(phi_d(f, 7).substitute(2, 1));
  CHECK(b.factors.size() == 1);
  CHECK(b.factors[0].multiplicity == 1);

  // B6(x0, x1, 0) of phi_9 is the product of x0 + beta x1 over beta in F_8 minus F_2.
  auto f8 = Field::create(3);
  const FieldEmbedding emb(f, f8);
  const TriPoly b6 = phi_d(f, 9).substitute(2, 0).map_coeffs(f8, [&](word_t c) { return emb(c); });
  TriPoly expect = TriPoly::constant(f8, 1);
  for (word_t beta = 2; beta < 8; ++beta) expect = expect * (P(f8, "x0") + P(f8, "x1").scaled(beta));
  CHECK(b6 == expect);
  const auto c = bi_factor(b6);
  CHECK(c.factors.size() == 6);
  for (const auto& [g, e] : c.factors) CHECK(g.total_degree() == 1);
}

TEST_CASE("factor products reproduce the input") {
  for (unsigned m : {1U, 2U, 4U}) {
    auto f = Field::create(m);
    std::mt19937_64 rng(77 + m);
    for (int i = 0; i < 40; ++i) {
      TriPoly p = random_bi(f, rng, 3, 4) * random_bi(f, rng, 3, 4);
      if (i % 4 == 0) p = p * random_bi(f, rng, 2, 3).pow(2);
      if (p.is_constant()) continue;
      const auto fac = bi_factor(p);
      CHECK(rebuild(fac, f) == p);
      for (const auto& [g, e] : fac.factors) CHECK(g.leading().second == 1);
    }
  }
}

TEST_CASE("factors are irreducible by exhaustive search") {
  auto f = Field::create(1);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    const TriPoly p = random_bi(f, rng, 5, 8);
    if (p.total_degree() < 2) continue;
    const auto fac = bi_factor(p);
    CHECK(rebuild(fac, f) == p);
    for (const auto& [g, e] : fac.factors) CHECK_FALSE(has_split(g));
  }
}

TEST_CASE("degree cap and strict base field") {
  auto f = Field::create(1);
  CHECK_THROWS_AS(bi_factor(P(f, "x0^33 + x1")), Error);
  BiFactorOptions strict;
  strict.allow_extension = false;
  // x0 x1 (x0 + x1) + 1: every specialization over F_2 has a repeated root or lower degree.
  try {
    bi_factor(P(f, "x0^2*x1 + x0*x1^2 + 1"), strict);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoGoodEvaluationPoint);
  }
  CHECK(bi_factor(P(f, "x0^2*x1 + x0*x1^2 + 1")).factors.size() >= 1);
}
