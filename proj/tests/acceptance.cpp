// Acceptance suite: one line per criterion. `acceptance` runs all of them,
// `acceptance N` runs criterion N only. Exit status is nonzero if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "apn/bounds.hpp"
#include "apn/diffanal.hpp"
#include "apn/error.hpp"
#include "apn/geomcrit.hpp"
#include "apn/search.hpp"
#include "apn/sigma.hpp"

using namespace apn;

namespace {

// Pinned limits (seconds) and sample sizes.
constexpr double kLimitTables = 1.0;
constexpr double kLimitCatalogue = 120.0;
constexpr double kLimitOracle = 60.0;
constexpr double kLimitSmooth = 300.0;
constexpr double kLimitDegree6 = 300.0;
constexpr double kLimitDegree7 = 1800.0;
constexpr double kLimitDegree9 = 1200.0;
constexpr int kSamples = 100;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
  double limit = 0;  // 0: no runtime limit
};

using Fn = std::function<Outcome()>;

struct Criterion {
  int id;
  const char* name;
  Fn run;
};

std::string join(const std::vector<unsigned>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

PolyFunc random_normalized(const FieldPtr& f, std::mt19937_64& rng, unsigned lo, unsigned hi) {
  std::vector<unsigned> degrees;
  for (unsigned d = lo; d <= hi && d < f->size(); ++d)
    if (!is_power_of_two(d)) degrees.push_back(d);
  const unsigned d = degrees[rng() % degrees.size()];
  PolyFunc::Terms t;
  for (unsigned e = 3; e < d; ++e)
    if (!is_power_of_two(e)) t[e] = static_cast<word_t>(rng()) & f->mask();
  word_t lead = 0;
  while (lead == 0) lead = static_cast<word_t>(rng()) & f->mask();
  t[d] = lead;
  return PolyFunc(f, t);
}

Outcome tables() {
  Outcome o{true, "", kLimitTables};
  std::vector<std::string> bad, flagged;
  for (auto kind : {MmaxKind::Irreducible, MmaxKind::IsolatedSingularities}) {
    for (const MmaxRow& r : mmax_table(kind).rows) {
      const std::string tag = std::string(to_string(kind)) + " d<=" + std::to_string(r.d_max);
      if (!r.matches()) {
        o.pass = false;
        bad.push_back(tag + " expected " + std::to_string(r.expected) + " got " + std::to_string(r.m_max));
      } else if (r.flagged()) {
        flagged.push_back(tag + " (" + to_string(*r.form) + ")");
      }
    }
  }
  std::ostringstream os;
  os << (30 - bad.size()) << "/30 rows reproduced";
  for (const auto& b : bad) os << "; unmatched " << b;
  for (const auto& f : flagged) os << "; non-exact form " << f;
  o.detail = os.str();
  return o;
}

Outcome catalogue() {
  Outcome o{true, "", kLimitCatalogue};
  unsigned n = 0;
  std::vector<std::string> bad;
  auto check = [&](const CatalogueEntry& e) {
    const auto s = differential_spectrum(PolyFunc::monomial(Field::standard(e.m), e.d));
    ++n;
    if (s.delta != 2) {
      o.pass = false;
      bad.push_back(std::string(to_string(e.family)) + " m=" + std::to_string(e.m) + " d=" + std::to_string(e.d));
    }
  };
  for (unsigned m = 1; m <= 9; ++m)
    for (const auto& e : apn_catalogue(m)) check(e);
  check({ApnFamily::Dobbertin, 10, std::nullopt, known_apn_exponent(ApnFamily::Dobbertin, 10)});
  o.detail = std::to_string(n) + " instances, " + std::to_string(bad.size()) + " with delta != 2";
  for (const auto& b : bad) o.detail += "; " + b;
  return o;
}

Outcome oracle() {
  Outcome o{true, "", kLimitOracle};
  std::mt19937_64 rng(kSeed);
  unsigned disagree = 0, apn = 0, total = 0;
  for (unsigned m : {3u, 4u, 5u}) {
    const FieldPtr F = Field::standard(m);
    for (int i = 0; i < kSamples; ++i) {
      const PolyFunc f = random_normalized(F, rng, 5, 9);
      const bool a = apn_via_surface(f), b = is_apn(f);
      disagree += a != b;
      apn += b;
      ++total;
    }
  }
  o.pass = disagree == 0;
  o.detail = std::to_string(total) + " functions, " + std::to_string(apn) + " APN, " + std::to_string(disagree) +
             " disagreements";
  return o;
}

Outcome point_count_bound() {
  Outcome o;
  std::ostringstream os;
  auto check = [&](unsigned d, unsigned m) {
    const FieldPtr F = Field::standard(m);
    const PolyFunc f = PolyFunc::monomial(F, d);
    const PointCount pc = count_points(build_sigma(f));
    const std::uint64_t bound = 4 * ((d - 3) * F->size() + 1);
    const bool ok = is_apn(f) && pc.projective_total <= bound;
    o.pass = o.pass && ok;
    os << "x^" << d << "/F_2^" << m << " " << pc.projective_total << "<=" << bound << (ok ? "" : " FAILED") << "; ";
  };
  for (unsigned m : {3u, 4u, 5u}) check(3, m);
  for (unsigned m : {3u, 5u}) check(5, m);
  check(7, 5);
  o.detail = os.str();
  return o;
}

Outcome lemma41() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 1);
  unsigned fails = 0, diag_const = 0, diag_fail = 0, total = 0;
  for (unsigned m : {3u, 4u, 5u}) {
    const FieldPtr F = Field::standard(m);
    for (int i = 0; i < kSamples; ++i) {
      const PolyFunc f = random_normalized(F, rng, 5, 14);
      ++total;
      if (!lemma41_check(f)) ++fails;
      try {
        ++diag_const;
        if (!singular_at_infinity_diagonal(f)) ++diag_fail;
      } catch (const Error& e) {
        --diag_const;
        if (e.code() != ErrorCode::DiagonalNotConstant) throw;
      }
    }
  }
  o.pass = fails == 0 && diag_fail == 0 && diag_const > 0;
  o.detail = std::to_string(total) + " functions, " + std::to_string(fails) + " divisibility failures; " +
             std::to_string(diag_const) + " with constant diagonal, " + std::to_string(diag_fail) +
             " without a singular (1:1:1:0)";
  return o;
}

Outcome smooth_list() {
  Outcome o{true, "", kLimitSmooth};
  const std::vector<unsigned> expected{7, 11, 19, 23, 27, 35, 39, 47, 51, 55, 59, 67, 75, 83, 95};
  std::vector<unsigned> got, extra, missing;
  for (unsigned d = 5; d < 100; ++d)
    if (jw_smooth(d).established()) got.push_back(d);
  std::set_difference(got.begin(), got.end(), expected.begin(), expected.end(), std::back_inserter(extra));
  std::set_difference(expected.begin(), expected.end(), got.begin(), got.end(), std::back_inserter(missing));
  bool cross = true;
  for (unsigned d : {7u, 11u, 19u, 23u}) cross = cross && curve_singular_points(infinity_curve(d)).empty();
  const auto pts9 = curve_singular_points(infinity_curve(9));
  const bool has111 = std::any_of(pts9.begin(), pts9.end(), [](const ProjectivePoint& p) {
    return p.coords == std::array<word_t, 3>{1, 1, 1};
  });
  o.pass = extra.empty() && missing.empty() && cross && has111;
  o.detail = "established on {" + join(got) + "}";
  if (!extra.empty()) o.detail += "; not in the list: {" + join(extra) + "}";
  if (!missing.empty()) o.detail += "; missing: {" + join(missing) + "}";
  o.detail += std::string("; d=7,11,19,23 smooth: ") + (cross ? "yes" : "NO") + "; d=9 singular at (1:1:1): " +
              (has111 ? "yes" : "NO");
  return o;
}

Outcome binomial() {
  Outcome o;
  const CriterionVerdict v = binomial_criterion(13, 7);
  const auto mm = m_max(MmaxKind::Irreducible, BoundForm::Exact, 13);
  o.pass = v.established() && mm == 19u;
  o.detail = std::string("binomial(13,7) ") + to_string(v.status) + ", m_max(13) = " + (mm ? std::to_string(*mm) : "none");
  return o;
}

std::string coeffs(const SearchHit& h) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < h.coeffs.size(); ++i) os << (i ? "," : "") << h.coeffs[i];
  os << ")";
  return os.str();
}

Outcome degree6() {
  Outcome o{true, "", kLimitDegree6};
  std::ostringstream os;
  for (unsigned m : {4u, 5u, 6u}) {
    const ClassificationReport r = classify_degree6(m);
    const auto& hits = r.scans[0].result.hits;
    const bool ok = hits.size() == 1 && hits[0].coeffs == std::vector<word_t>{0, 0};
    o.pass = o.pass && ok;
    os << "m=" << m << ": " << hits.size() << " hit(s)" << (hits.size() == 1 ? " " + coeffs(hits[0]) : "") << "; ";
  }
  unsigned planes = 0;
  for (unsigned m : {3u, 4u, 5u, 6u}) {
    const FieldPtr F = Field::standard(m);
    for (word_t a5 = 1; a5 < F->size(); ++a5) {
      const PolyFunc f(F, {{6, 1}, {5, a5}, {3, F->pow(a5, 3)}});
      const TriPoly c = TriPoly::constant(F, a5);
      const TriPoly x0 = TriPoly::var(F, 0), x1 = TriPoly::var(F, 1), x2 = TriPoly::var(F, 2);
      const bool eq = build_sigma(f).phi == (x0 + x1 + c) * (x0 + x2 + c) * (x1 + x2 + c);
      o.pass = o.pass && eq;
      planes += eq;
    }
  }
  os << planes << " three-plane identities; ";
  const FieldPtr F8 = Field::standard(3);
  const SigmaSurface s = build_sigma(PolyFunc(F8, {{6, 1}, {5, 1}}));
  unsigned on = 0;
  for (word_t l = 2; l < 8; ++l) {
    const word_t den = F8->inv(F8->mul(l, l ^ 1));
    const std::array<word_t, 3> p{den, F8->mul(F8->pow(l, 3), den), 1};
    on += s.phi.eval(p) == 0 && p[0] != p[1] && p[1] != p[2] && p[0] != p[2];
  }
  o.pass = o.pass && on == 6;
  os << on << "/6 parametric points on the surface";
  o.detail = os.str();
  return o;
}

Outcome degree7() {
  Outcome o{true, "", kLimitDegree7};
  std::ostringstream os;
  for (unsigned m : {4u, 6u}) {
    const ClassificationReport r = classify_degree7(m);
    o.pass = o.pass && r.hit_count() == 0;
    os << "m=" << m << ": " << r.hit_count() << " hits; ";
  }
  const ClassificationReport r5 = classify_degree7(5);
  bool has_x7 = false;
  for (const auto& h : r5.scans[0].result.hits) has_x7 = has_x7 || h.coeffs == std::vector<word_t>{0, 0, 0};
  const bool same = r5.all_hits_match(0);
  o.pass = o.pass && has_x7 && same;
  os << "m=5: " << r5.hit_count() << " hits, x^7 among them: " << (has_x7 ? "yes" : "no")
     << ", all share the x^7 fingerprint: " << (same ? "yes" : "no");
  o.detail = os.str();
  return o;
}

Outcome degree9() {
  Outcome o{true, "", kLimitDegree9};
  std::ostringstream os;
  SearchJob j;
  j.field = Field::standard(6);
  j.family = "x^9 + A*x^6 + B*x^3";
  const SearchResult r = scan(j);
  std::size_t both = 0;
  for (const auto& h : r.hits) both += h.coeffs[0] != 0 && h.coeffs[1] != 0;
  o.pass = both > 0;
  os << "x^9+A x^6+B x^3 over F_64: " << r.hits.size() << " hits, " << both << " with A,B != 0";
  for (unsigned m : {5u, 6u}) {
    SearchJob k;
    k.field = Field::standard(m);
    k.family = "x^9 + A*x^6 + A^2*x^3";
    k.nonzero = {'A'};
    const SearchResult rk = scan(k);
    o.pass = o.pass && rk.hits.empty() && rk.complete();
    os << "; x^9+A x^6+A^2 x^3 over F_2^" << m << ": " << rk.hits.size() << " hits";
  }
  o.detail = os.str();
  return o;
}

Outcome curve_bounds() {
  Outcome o;
  const auto d6 = first_excluded_m([](const BigInt& q) { return curve_exclusion(6, q); });
  const auto ell = first_excluded_m([](const BigInt& q) { return weil_exclusion(1, 12, q); });
  o.pass = d6 == 9u && ell == 5u && !weil_exclusion(1, 12, 16) && weil_exclusion(1, 12, 32);
  o.detail = "D=6 excluded from m=" + (d6 ? std::to_string(*d6) : "none") + " (survives m<=" +
             (d6 ? std::to_string(*d6 - 1) : "?") + "); elliptic excluded from m=" + (ell ? std::to_string(*ell) : "none");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "m_max tables", tables},
      {2, "known APN catalogue", catalogue},
      {3, "surface oracle equivalence", oracle},
      {4, "APN point-count bound", point_count_bound},
      {5, "partial divisibility and diagonal singularity", lemma41},
      {6, "smooth curve at infinity list", smooth_list},
      {7, "binomial criterion and m <= 19", binomial},
      {8, "degree-6 classification", degree6},
      {9, "degree-7 classification", degree7},
      {10, "degree-9 families", degree9},
      {11, "curve exclusion instances", curve_bounds},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool slow = o.limit > 0 && secs > o.limit;
    const bool pass = o.pass && !slow;
    failed += !pass;
    std::printf("[%s] criterion %2d  %-46s %8.2fs  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                o.detail.c_str(), slow ? "  (over time limit)" : "");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
