#include "doctest.h"

#include <random>
#include <set>

#include "apn/bivariate.hpp"
#include "apn/geomcrit.hpp"
#include "apn/sigma.hpp"

using namespace apn;

namespace {

TriPoly P(const FieldPtr& f, const std::string& s) { return TriPoly::parse(f, s); }

// Singular points of a curve over F_2 with coordinates in F_{2^n}, by enumeration.
std::set<std::array<word_t, 3>> brute_singular(const TriPoly& c, unsigned n) {
  const FieldPtr e = Field::standard(n);
  const FieldEmbedding emb(c.field(), e);
  auto up = [&](const TriPoly& p) { return p.map_coeffs(e, [&](word_t x) { return emb(x); }); };
  const TriPoly C = up(c), d0 = up(c.partial(0)), d1 = up(c.partial(1)), d2 = up(c.partial(2));
  std::set<std::array<word_t, 3>> out;
  auto test = [&](std::array<word_t, 3> p) {
    if (C.eval(p) == 0 && d0.eval(p) == 0 && d1.eval(p) == 0 && d2.eval(p) == 0) out.insert(p);
  };
  for (word_t a = 0; a < e->size(); ++a) {
    for (word_t b = 0; b < e->size(); ++b) test({a, b, 1});
    test({a, 1, 0});
  }
  test({1, 0, 0});
  return out;
}

// Scales the point so that its last nonzero coordinate is 1, to compare with brute force.
std::array<word_t, 3> last_one(const Field& F, std::array<word_t, 3> p) {
  for (int i = 2; i >= 0; --i) {
    if (p[i] == 0) continue;
    const word_t s = F.inv(p[i]);
    for (auto& x : p) x = F.mul(x, s);
    break;
  }
  return p;
}

TriPoly product(const std::vector<TriPoly>& fs) {
  TriPoly r = TriPoly::constant(fs.front().field(), 1);
  for (const auto& f : fs) r = r * f;
  return r;
}

bool proportional(const TriPoly& a, const TriPoly& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  const Field& F = *a.field();
  return a.scaled(F.inv(a.leading().second)) == b.scaled(F.inv(b.leading().second));
}

TriPoly to_field(const TriPoly& p, const FieldPtr& e) {
  const FieldEmbedding emb(p.field(), e);
  return p.map_coeffs(e, [&](word_t x) { return emb(x); });
}

}  // namespace

TEST_CASE("congruence rule for irreducibility") {
  CHECK(jmw_irreducible(7).established());
  CHECK(jmw_irreducible(13).status == CriterionStatus::Unknown);
  CHECK(jmw_irreducible(21).established());
  CHECK(jmw_irreducible(11).established());
  CHECK(jmw_irreducible(9).status == CriterionStatus::Unknown);
  CHECK_THROWS_AS(jmw_irreducible(4), Error);
}

TEST_CASE("smoothness rule") {
  const std::set<unsigned> listed{7, 11, 19, 23, 27, 35, 39, 47, 51, 55, 59, 67, 75, 83, 95};
  std::set<unsigned> got;
  for (unsigned d = 5; d < 100; ++d)
    if (jw_smooth(d).established()) got.insert(d);
  for (unsigned d : listed) CHECK(got.count(d) == 1);
  CHECK(jw_smooth(9).status == CriterionStatus::Unknown);
  CHECK(jw_smooth(23).established());
  // l = 43 is a prime = 3 mod 8 and 2^7 = -1 mod 43, so d = 87 also qualifies.
  CHECK(order_of_two(43) == 14);
  CHECK(jw_smooth(87).established());
  got.erase(87);
  CHECK(got == listed);
  // Primes l = +-3 mod 8 always satisfy the first branch.
  for (unsigned l : {3u, 5u, 11u, 13u, 19u, 29u, 37u, 43u, 53u, 59u, 61u, 67u})
    CHECK(jw_smooth(2 * l + 1).established());
  CHECK(order_of_two(7) == 3);
  CHECK(order_of_two(23) == 11);
}

TEST_CASE("absolute irreducibility") {
  const CriterionVerdict v7 = absolutely_irreducible(infinity_curve(7));
  CHECK(v7.established());

  const CriterionVerdict v9 = absolutely_irreducible(infinity_curve(9));
  REQUIRE(v9.status == CriterionStatus::Refuted);
  CHECK(proportional(product(v9.witness_factors), to_field(infinity_curve(9), v9.witness_factors.front().field())));

  const CriterionVerdict v3 = absolutely_irreducible(infinity_curve(3));
  CHECK(v3.status == CriterionStatus::Refuted);
  CHECK(v3.witness_factors.size() == 1);

  // Irreducible over F_2, two lines over F_4.
  auto f2 = Field::standard(1);
  const CriterionVerdict q = absolutely_irreducible(P(f2, "x0^2 + x0*x1 + x1^2"));
  REQUIRE(q.status == CriterionStatus::Refuted);
  CHECK(q.witness_factors.size() == 2);
  CHECK(q.witness_factors.front().field()->m() == 2);
  CHECK(proportional(product(q.witness_factors), to_field(P(f2, "x0^2 + x0*x1 + x1^2"), Field::standard(2))));

  CHECK(absolutely_irreducible(P(f2, "x0*x1 + x2^2")).established());
  const CriterionVerdict x2 = absolutely_irreducible(P(f2, "x0*x2 + x2^2"));
  CHECK(x2.status == CriterionStatus::Refuted);
  CHECK(absolutely_irreducible(P(f2, "x2")).established());

  for (unsigned d : {7u, 11u, 15u, 19u}) {
    CHECK(jmw_irreducible(d).established());
    CHECK(absolutely_irreducible(infinity_curve(d)).established());
  }
  CHECK_THROWS_AS(absolutely_irreducible(infinity_curve(40)), Error);
  CHECK_THROWS_AS(absolutely_irreducible(P(f2, "x0^2 + x1")), Error);

  // Random products over F_4 are refuted with a factorization that multiplies back.
  std::mt19937_64 rng(8);
  auto f4 = Field::standard(2);
  auto rnd = [&](unsigned deg) {
    TriPoly p(f4);
    for (unsigned i = 0; i <= deg; ++i) {
      Monomial m;
      m.e = {static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(deg - i), 0, 0};
      p.add_term(m, static_cast<word_t>(rng() & 3));
    }
    Monomial m;
    m.e = {0, 0, static_cast<std::uint16_t>(deg), 0};
    p.add_term(m, 1);
    return p;
  };
  for (int it = 0; it < 6; ++it) {
    const TriPoly a = rnd(2), b = rnd(3);
    const TriPoly c = a * b;
    const CriterionVerdict v = absolutely_irreducible(c);
    REQUIRE(v.status == CriterionStatus::Refuted);
    CHECK(proportional(product(v.witness_factors), to_field(c, v.witness_factors.front().field())));
  }
}

TEST_CASE("singular points") {
  for (unsigned d : {7u, 11u, 19u, 23u}) {
    CHECK(jw_smooth(d).established());
    CHECK(curve_singular_points(infinity_curve(d)).empty());
  }
  const auto s9 = curve_singular_points(infinity_curve(9));
  CHECK_FALSE(s9.empty());
  bool has111 = false;
  for (const auto& p : s9) has111 = has111 || (p.degree() == 1 && p.coords == std::array<word_t, 3>{1, 1, 1});
  CHECK(has111);

  auto f2 = Field::standard(1);
  CHECK(curve_singular_points(P(f2, "x0*x1 + x2^2")).empty());
  const auto node = curve_singular_points(P(f2, "x1^2*x2 + x0^3 + x0^2*x2"));
  REQUIRE(node.size() == 1);
  CHECK(node.front().coords == std::array<word_t, 3>{0, 0, 1});
  CHECK_THROWS_AS(curve_singular_points(P(f2, "x0^2*x1 + x1^3")), Error);
  CHECK_THROWS_AS(curve_singular_points(infinity_curve(40)), Error);

  // Against enumeration over F_16 for curves over F_2.
  std::vector<TriPoly> curves;
  for (unsigned d : {5u, 6u, 7u, 9u, 10u, 11u, 12u, 13u}) curves.push_back(infinity_curve(d));
  curves.push_back(P(f2, "x0^3 + x1^3 + x2^3"));
  curves.push_back(P(f2, "x0^2*x1^2 + x1^2*x2^2 + x0^2*x2^2 + x0*x1*x2^2"));
  curves.push_back(P(f2, "x0^4 + x1^3*x2 + x2^4 + x0*x1*x2^2"));
  for (const auto& c : curves) {
    if (!bi_squarefree(c.substitute(2, 1))) continue;
    std::set<std::array<word_t, 3>> mine;
    const FieldPtr e = Field::standard(4);
    for (const auto& p : curve_singular_points(c)) {
      if (4 % p.degree() != 0) continue;
      const FieldEmbedding emb(p.field, e);
      mine.insert(last_one(*e, {emb(p.coords[0]), emb(p.coords[1]), emb(p.coords[2])}));
    }
    std::set<std::array<word_t, 3>> brute;
    for (const auto& p : brute_singular(c, 4)) brute.insert(last_one(*e, p));
    CHECK_MESSAGE(mine == brute, c.to_string());
  }
}

TEST_CASE("binomial criterion") {
  const CriterionVerdict v = binomial_criterion(13, 7);
  CHECK(v.established());
  CHECK_THROWS_AS(binomial_criterion(7, 7), Error);
  CHECK_THROWS_AS(binomial_criterion(7, 2), Error);
  CHECK(binomial_criterion(9, 3).status == CriterionStatus::Unknown);
  CHECK(binomial_criterion(12, 8).status == CriterionStatus::Unknown);
  // phi_d and phi_r both contain the line x0 + x1 + x2 when it divides both.
  const TriPoly l = P(Field::standard(1), "x0 + x1 + x2");
  for (unsigned d = 5; d <= 20; ++d) {
    for (unsigned r = 3; r < d; ++r) {
      if (is_power_of_two(d) || is_power_of_two(r) || r == 3) continue;
      bool ld = true, lr = true;
      try {
        tp_exact_divide(infinity_curve(d), l);
      } catch (const NotDivisibleError&) {
        ld = false;
      }
      try {
        tp_exact_divide(infinity_curve(r), l);
      } catch (const NotDivisibleError&) {
        lr = false;
      }
      if (ld && lr) CHECK(binomial_criterion(d, r).status == CriterionStatus::Unknown);
    }
  }
}

TEST_CASE("squarefreeness agrees with specializations") {
  auto e = Field::standard(8);
  const FieldEmbedding emb(Field::standard(1), e);
  for (unsigned d = 5; d <= 24; ++d) {
    if (is_power_of_two(d)) continue;
    const TriPoly g = infinity_curve(d).substitute(2, 1);
    const bool sqf = bi_squarefree(g);
    const TriPoly ge = g.map_coeffs(e, [&](word_t x) { return emb(x); });
    bool some_sqf = false;
    for (word_t c = 2; c < 40; ++c) {
      const UniPoly u = ge.substitute(1, c).to_univariate(0);
      bool rep = false;
      for (const auto& f : uni_factor(u).factors) rep = rep || f.multiplicity > 1;
      some_sqf = some_sqf || !rep;
      if (!sqf) CHECK(rep);
    }
    if (sqf) CHECK(some_sqf);
  }
}

TEST_CASE("voloch criterion") {
  CHECK(voloch_criterion(9, 6).established());
  CHECK(voloch_criterion(12, 6).status == CriterionStatus::Unknown);
  const CriterionVerdict v98 = voloch_criterion(9, 8);
  CHECK(v98.status == CriterionStatus::Unknown);
  CHECK(v98.detail.find("d only") != std::string::npos);
  CHECK(voloch_criterion(16, 5).status == CriterionStatus::Unknown);
  CHECK(voloch_criterion(13, 7).status == CriterionStatus::Unknown);  // gcd(12, 6) = 6
  CHECK(voloch_criterion(13, 5).established());                        // gcd(12, 4) = 4
  CHECK_THROWS_AS(voloch_criterion(5, 5), Error);
}

TEST_CASE("surface verdict") {
  auto f16 = Field::create(4);
  const SurfaceVerdict s7 = surface_irreducibility(parse_function(f16, "x^7 + x^5"));
  CHECK(s7.status == CriterionStatus::Established);
  CHECK(s7.infinity.established());
  const SurfaceVerdict s9 = surface_irreducibility(parse_function(f16, "x^9 + x^6 + x^3"));
  CHECK(s9.infinity.status == CriterionStatus::Refuted);
  CHECK(s9.sections.size() == 2);
  CHECK(s9.voloch.size() == 1);
  // x^6 + a x^5 + a^3 x^3 is three planes: nothing can be established.
  const word_t a = 3;
  PolyFunc::Terms t{{6, 1}, {5, a}, {3, f16->pow(a, 3)}};
  const SurfaceVerdict s6 = surface_irreducibility(PolyFunc(f16, t), {0, 1, 2, 5});
  CHECK(s6.status == CriterionStatus::Unknown);
}
