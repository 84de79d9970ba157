#include "apn/search.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include <omp.h>

#include "json.hpp"

#include "apn/error.hpp"

namespace apn {

namespace {

std::uint64_t reduce_exponent(std::uint64_t e, std::uint64_t q) {
  if (e == 0) return 0;
  return (e - 1) % (q - 1) + 1;
}

bool affine_exponent(std::uint64_t e) { return e == 0 || is_power_of_two(e); }

struct CompiledTerm {
  word_t coeff;
  std::size_t slot;                                  // index into exponents
  std::vector<std::pair<std::size_t, unsigned>> free;  // free placeholder index -> power
};

// The family after exponent reduction, stripping and leading normalization.
struct Compiled {
  FieldPtr field;
  std::uint64_t q = 0;
  PolyExpr expr;
  std::vector<char> free;          // enumerated placeholders
  std::vector<char> fixed_to_one;
  std::vector<bool> nonzero;       // per free placeholder
  std::vector<std::uint64_t> exponents;
  std::vector<std::vector<word_t>> powers;  // powers[slot][x] = x^e
  std::vector<CompiledTerm> terms;
  std::uint64_t total = 1;
  std::uint64_t hash = 0;
  bool skip_q_affine = true;
  bool strip_affine = true;

  // Coefficient per exponent slot; false when the filters skip the candidate.
  bool coefficients(std::uint64_t index, std::vector<word_t>& values, std::vector<word_t>& ce) const {
    const unsigned m = field->m();
    values.resize(free.size());
    for (std::size_t i = 0; i < free.size(); ++i) {
      values[i] = static_cast<word_t>((index >> (m * i)) & field->mask());
      if (nonzero[i] && values[i] == 0) return false;
    }
    ce.assign(exponents.size(), 0);
    for (const auto& t : terms) {
      word_t c = t.coeff;
      for (const auto& [i, p] : t.free) c = field->mul(c, field->pow(values[i], p));
      ce[t.slot] ^= c;
    }
    if (skip_q_affine) {
      bool affine = true;
      for (std::size_t s = 0; s < exponents.size() && affine; ++s) {
        if (ce[s] != 0 && !affine_exponent(exponents[s])) affine = false;
      }
      if (affine) return false;
    }
    return true;
  }

  void table(const std::vector<word_t>& ce, std::vector<word_t>& out) const {
    out.assign(q, 0);
    for (std::size_t s = 0; s < exponents.size(); ++s) {
      if (ce[s] == 0) continue;
      const auto& pw = powers[s];
      for (std::uint64_t x = 0; x < q; ++x) out[x] ^= field->mul(ce[s], pw[x]);
    }
  }

  // The candidate as a PolyFunc, from the parsed expression.
  PolyFunc function(const std::vector<word_t>& values) const {
    std::vector<word_t> all;
    for (char ph : expr.placeholders) {
      if (std::find(fixed_to_one.begin(), fixed_to_one.end(), ph) != fixed_to_one.end()) {
        all.push_back(1);
      } else {
        const auto i = static_cast<std::size_t>(std::find(free.begin(), free.end(), ph) - free.begin());
        all.push_back(values[i]);
      }
    }
    PolyFunc f = instantiate(field, expr, all);
    if (!strip_affine) return f;
    PolyFunc::Terms t;
    for (const auto& [e, c] : f.terms()) {
      if (!affine_exponent(e)) t[e] = c;
    }
    return PolyFunc(field, t);
  }
};

std::string canonical(const PolyExpr& e) {
  std::ostringstream os;
  os << std::hex;
  for (const auto& t : e.terms) {
    os << t.coeff << '*' << t.x_exp;
    for (const auto& [ph, p] : t.free) os << ',' << ph << p;
    os << ';';
  }
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

PolyExpr parse_family(const SearchJob& job) {
  if (!job.field) throw Error(ErrorCode::InvalidParameters, "search job without a field");
  const bool blank = std::all_of(job.family.begin(), job.family.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  return parse_poly_expr(job.field, blank ? std::string_view("0") : std::string_view(job.family));
}

std::uint64_t hash_of(const SearchJob& job, const PolyExpr& e) {
  std::ostringstream os;
  os << "m=" << job.field->m() << ";mod=" << std::hex << job.field->modulus() << std::dec << ";family=" << canonical(e)
     << ";nonzero=";
  std::vector<char> nz = job.nonzero;
  std::sort(nz.begin(), nz.end());
  for (char c : nz) os << c;
  os << ";lead=" << job.normalize_leading << ";strip=" << job.strip_affine << ";skip=" << job.skip_q_affine;
  return fnv1a(os.str());
}

Compiled compile(const SearchJob& job) {
  Compiled c;
  c.field = job.field;
  c.expr = parse_family(job);
  c.q = job.field->size();
  c.hash = hash_of(job, c.expr);
  c.skip_q_affine = job.skip_q_affine;
  c.strip_affine = job.strip_affine;
  const auto& F = *c.field;
  for (char ph : job.nonzero) {
    if (!std::binary_search(c.expr.placeholders.begin(), c.expr.placeholders.end(), ph)) {
      throw Error(ErrorCode::InvalidParameters, std::string("nonzero constraint on unknown placeholder ") + ph);
    }
  }

  struct Raw {
    word_t coeff;
    std::uint64_t exp;
    std::map<char, unsigned> free;
  };
  std::vector<Raw> raw;
  for (const auto& t : c.expr.terms) {
    if (t.coeff == 0) continue;
    const std::uint64_t e = reduce_exponent(t.x_exp, c.q);
    if (affine_exponent(e)) {
      if (!t.free.empty()) {
        throw Error(ErrorCode::InvalidParameters, "free coefficient on affine degree " + std::to_string(t.x_exp));
      }
      if (job.strip_affine) continue;
    }
    raw.push_back({t.coeff, e, t.free});
  }

  if (job.normalize_leading && !raw.empty()) {
    std::uint64_t top = 0;
    for (const auto& r : raw) top = std::max(top, r.exp);
    const auto n_top = std::count_if(raw.begin(), raw.end(), [&](const Raw& r) { return r.exp == top; });
    auto it = std::find_if(raw.begin(), raw.end(), [&](const Raw& r) { return r.exp == top; });
    if (n_top == 1 && it->free.size() == 1 && it->free.begin()->second == 1 && std::gcd(top, c.q - 1) == 1) {
      const char ph = it->free.begin()->first;
      const bool elsewhere = std::any_of(raw.begin(), raw.end(), [&](const Raw& r) { return &r != &*it && r.free.count(ph); });
      const bool nz = std::find(job.nonzero.begin(), job.nonzero.end(), ph) != job.nonzero.end();
      if (!elsewhere && nz) {
        c.fixed_to_one.push_back(ph);
        it->free.clear();
      }
    }
  }

  for (char ph : c.expr.placeholders) {
    if (std::find(c.fixed_to_one.begin(), c.fixed_to_one.end(), ph) != c.fixed_to_one.end()) continue;
    c.free.push_back(ph);
    c.nonzero.push_back(std::find(job.nonzero.begin(), job.nonzero.end(), ph) != job.nonzero.end());
  }
  for (std::size_t i = 0; i < c.free.size(); ++i) {
    if (c.total > (std::uint64_t{1} << 62) / c.q) throw Error(ErrorCode::BudgetExceeded, "family has more than 2^62 candidates");
    c.total *= c.q;
  }

  for (const auto& r : raw) {
    auto pos = std::find(c.exponents.begin(), c.exponents.end(), r.exp);
    const auto slot = static_cast<std::size_t>(pos - c.exponents.begin());
    if (pos == c.exponents.end()) {
      c.exponents.push_back(r.exp);
      std::vector<word_t> pw(c.q);
      for (std::uint64_t x = 0; x < c.q; ++x) pw[x] = F.pow(static_cast<word_t>(x), r.exp);
      c.powers.push_back(std::move(pw));
    }
    CompiledTerm t{r.coeff, slot, {}};
    for (const auto& [ph, p] : r.free) {
      const auto i = static_cast<std::size_t>(std::find(c.free.begin(), c.free.end(), ph) - c.free.begin());
      t.free.emplace_back(i, p);
    }
    c.terms.push_back(std::move(t));
  }
  return c;
}

SearchResult run(const SearchJob& job, bool parallel) {
  const auto t0 = std::chrono::steady_clock::now();
  const Compiled c = compile(job);
  SearchResult res;
  res.placeholders = c.free;
  res.fixed_to_one = c.fixed_to_one;
  res.total = c.total;
  res.family_hash = c.hash;
  if (job.start > c.total) throw Error(ErrorCode::CorruptCheckpoint, "start beyond the end of the family");
  if (job.budget == 0) throw Error(ErrorCode::InvalidParameters, "budget must be positive");

  const std::uint64_t per = c.q * c.q;
  const std::uint64_t allowed = job.budget / per;
  std::uint64_t end = c.total;
  if (c.total - job.start > allowed) {
    end = job.start + allowed;
    res.budget_exceeded = true;
  }

  std::vector<std::uint64_t> hit_index;
  std::uint64_t aborted = 0, skipped = 0;
  const auto first = static_cast<std::int64_t>(job.start), last = static_cast<std::int64_t>(end);
  if (parallel) {
    const int threads = job.workers ? static_cast<int>(job.workers) : omp_get_max_threads();
#pragma omp parallel num_threads(threads) reduction(+ : aborted, skipped)
    {
      std::vector<word_t> values, ce, tab;
      std::vector<std::uint32_t> stamp;
      std::vector<std::uint64_t> local;
#pragma omp for schedule(dynamic, 64) nowait
      for (std::int64_t i = first; i < last; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        if (!c.coefficients(idx, values, ce)) {
          ++skipped;
          continue;
        }
        c.table(ce, tab);
        if (is_apn_table(tab, stamp)) {
          local.push_back(idx);
        } else {
          ++aborted;
        }
      }
#pragma omp critical
      hit_index.insert(hit_index.end(), local.begin(), local.end());
    }
    std::sort(hit_index.begin(), hit_index.end());
  } else {
    std::vector<word_t> values, ce, tab;
    std::vector<std::uint32_t> stamp;
    for (std::int64_t i = first; i < last; ++i) {
      const auto idx = static_cast<std::uint64_t>(i);
      if (!c.coefficients(idx, values, ce)) {
        ++skipped;
        continue;
      }
      c.table(ce, tab);
      if (is_apn_table(tab, stamp)) {
        hit_index.push_back(idx);
      } else {
        ++aborted;
      }
    }
  }

  std::vector<word_t> values, ce;
  for (std::uint64_t idx : hit_index) {
    c.coefficients(idx, values, ce);
    PolyFunc f = c.function(values);
    const DifferentialSpectrum ds = parallel ? differential_spectrum(f) : differential_spectrum_serial(f);
    if (ds.delta != 2) throw std::logic_error("search: hit failed the second pass at index " + std::to_string(idx));
    WalshFingerprint fp = parallel ? walsh_fingerprint(f) : walsh_fingerprint_serial(f);
    std::string dg = fingerprint_digest(fp);
    res.hits.push_back({idx, values, std::move(f), ds.delta, std::move(fp), std::move(dg)});
  }
  res.scanned = end - job.start;
  res.aborted_early = aborted;
  res.skipped = skipped;
  res.cursor = end;
  res.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string hex(word_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

}  // namespace

SearchResult scan(const SearchJob& job) { return run(job, true); }
SearchResult scan_serial(const SearchJob& job) { return run(job, false); }

SearchResult merge_results(const SearchResult& first, const SearchResult& rest) {
  if (first.family_hash != rest.family_hash) throw Error(ErrorCode::CorruptCheckpoint, "merging different families");
  if (first.cursor != rest.cursor - rest.scanned) throw Error(ErrorCode::CorruptCheckpoint, "runs are not contiguous");
  SearchResult r = rest;
  r.hits = first.hits;
  r.hits.insert(r.hits.end(), rest.hits.begin(), rest.hits.end());
  r.scanned = first.scanned + rest.scanned;
  r.aborted_early = first.aborted_early + rest.aborted_early;
  r.skipped = first.skipped + rest.skipped;
  r.elapsed_seconds = first.elapsed_seconds + rest.elapsed_seconds;
  return r;
}

std::uint64_t family_hash(const SearchJob& job) { return hash_of(job, parse_family(job)); }

std::string checkpoint_save(const SearchResult& result) {
  std::ostringstream os;
  os << "apn-checkpoint 1\nfamily " << std::hex << std::setw(16) << std::setfill('0') << result.family_hash << std::dec
     << "\ncursor " << result.cursor << "\n";
  return os.str();
}

SearchJob checkpoint_resume(const SearchJob& job, const std::string& text) {
  std::istringstream is(text);
  std::string magic, version, k1, hash_hex, k2, extra;
  std::uint64_t cursor = 0;
  if (!(is >> magic >> version >> k1 >> hash_hex >> k2 >> cursor) || magic != "apn-checkpoint" || version != "1" ||
      k1 != "family" || k2 != "cursor" || (is >> extra)) {
    throw Error(ErrorCode::CorruptCheckpoint, "malformed checkpoint");
  }
  std::uint64_t hash = 0;
  try {
    std::size_t used = 0;
    hash = std::stoull(hash_hex, &used, 16);
    if (used != hash_hex.size()) throw std::invalid_argument("hash");
  } catch (const std::exception&) {
    throw Error(ErrorCode::CorruptCheckpoint, "malformed family hash");
  }
  const Compiled c = compile(job);
  if (hash != c.hash) throw Error(ErrorCode::CorruptCheckpoint, "checkpoint belongs to a different family");
  if (cursor > c.total) throw Error(ErrorCode::CorruptCheckpoint, "cursor beyond the end of the family");
  SearchJob next = job;
  next.start = cursor;
  return next;
}

std::string hit_to_jsonl(const SearchHit& hit, const std::vector<char>& placeholders) {
  nlohmann::ordered_json j;
  j["index"] = hit.index;
  nlohmann::ordered_json co = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < placeholders.size() && i < hit.coeffs.size(); ++i) {
    co[std::string(1, placeholders[i])] = hex(hit.coeffs[i]);
  }
  j["coefficients"] = co;
  j["function"] = hit.function.to_string();
  j["delta"] = hit.delta;
  j["fingerprint"] = hit.digest;
  return j.dump();
}

std::optional<PolyFunc> candidate_at(const SearchJob& job, std::uint64_t index) {
  const Compiled c = compile(job);
  if (index >= c.total) throw Error(ErrorCode::InvalidParameters, "index beyond the end of the family");
  std::vector<word_t> values, ce;
  if (!c.coefficients(index, values, ce)) return std::nullopt;
  return c.function(values);
}

// ---------------------------------------------------------------------------
// Classification

std::size_t ClassificationReport::hit_count() const noexcept {
  std::size_t n = 0;
  for (const auto& s : scans) n += s.result.hits.size();
  return n;
}

bool ClassificationReport::all_hits_match(std::size_t reference) const {
  const auto& fp = references.at(reference).fingerprint;
  for (const auto& s : scans) {
    for (const auto& h : s.result.hits) {
      if (h.fingerprint != fp) return false;
    }
  }
  return true;
}

namespace {

constexpr const char* kCaveat =
    "fingerprint equality is necessary for CCZ equivalence but does not prove it";

ReferenceFingerprint reference(const FieldPtr& F, std::uint64_t d) {
  const PolyFunc f = PolyFunc::monomial(F, d);
  ReferenceFingerprint r;
  r.label = "x^" + std::to_string(d);
  r.apn = is_apn(f);
  r.fingerprint = walsh_fingerprint(f);
  r.digest = fingerprint_digest(r.fingerprint);
  return r;
}

void require_m(unsigned d, unsigned m, unsigned max_m) {
  if (m > max_m) throw Error(ErrorCode::InvalidParameters, "classification of degree " + std::to_string(d) + " needs m <= " + std::to_string(max_m));
  if ((std::uint64_t{1} << m) <= d) throw Error(ErrorCode::InvalidParameters, "degree " + std::to_string(d) + " needs q > d");
}

void add_scan(ClassificationReport& rep, std::string label, SearchJob job) {
  SearchResult r = scan(job);
  if (r.budget_exceeded) throw Error(ErrorCode::BudgetExceeded, label + ": " + std::to_string(r.total) + " candidates over budget");
  rep.scans.push_back({std::move(label), std::move(job), std::move(r)});
}

void finish(ClassificationReport& rep) {
  rep.caveat = kCaveat;
  rep.matches.clear();
  for (const auto& s : rep.scans) {
    std::vector<std::vector<std::string>> per;
    for (const auto& h : s.result.hits) {
      std::vector<std::string> labels;
      for (const auto& ref : rep.references) {
        if (ref.fingerprint == h.fingerprint) labels.push_back(ref.label);
      }
      per.push_back(std::move(labels));
    }
    rep.matches.push_back(std::move(per));
  }
}

SearchJob make_job(const FieldPtr& F, std::string family, std::vector<char> nonzero, std::uint64_t budget, unsigned workers) {
  SearchJob j;
  j.field = F;
  j.family = std::move(family);
  j.nonzero = std::move(nonzero);
  j.budget = budget;
  j.workers = workers;
  return j;
}

}  // namespace

ClassificationReport classify_degree6(unsigned m, std::uint64_t budget, unsigned workers) {
  require_m(6, m, 7);
  const FieldPtr F = Field::standard(m);
  ClassificationReport rep;
  rep.degree = 6;
  rep.m = m;
  add_scan(rep, "x^6 + A*x^5 + B*x^3", make_job(F, "x^6 + A*x^5 + B*x^3", {}, budget, workers));
  rep.references = {reference(F, 3), reference(F, 6)};
  finish(rep);
  return rep;
}

ClassificationReport classify_degree7(unsigned m, std::uint64_t budget, unsigned workers) {
  require_m(7, m, 6);
  const FieldPtr F = Field::standard(m);
  ClassificationReport rep;
  rep.degree = 7;
  rep.m = m;
  add_scan(rep, "x^7 + A*x^6 + B*x^5 + C*x^3", make_job(F, "x^7 + A*x^6 + B*x^5 + C*x^3", {}, budget, workers));
  rep.references = {reference(F, 7), reference(F, 3)};
  finish(rep);
  return rep;
}

PolyFunc reduce_degree9(const PolyFunc& f) {
  if (f.degree() != 9 || !f.is_normalized()) throw Error(ErrorCode::InvalidParameters, "reduce_degree9 needs a normalized degree-9 function");
  for (const auto& [e, c] : f.terms()) {
    if (e != 3 && e != 5 && e != 6 && e != 7 && e != 9) throw Error(ErrorCode::InvalidParameters, "term x^" + std::to_string(e) + " outside the degree-9 family");
  }
  const Field& F = *f.field();
  const PolyFunc g = make_monic(f);
  const word_t a7 = g.coeff(7), a6 = g.coeff(6), a5 = g.coeff(5);
  if (a7 != 0) {
    const word_t b = F.div(a6, a7);
    const word_t l = F.sqrt(a7);
    return make_monic(normalize(affine_transform(g, l, b, 1)));
  }
  if (a5 != 0) {
    const word_t l = F.sqrt(F.sqrt(a5));
    return make_monic(normalize(affine_transform(g, l, 0, 1)));
  }
  return g;
}

ClassificationReport classify_degree9(unsigned m, std::uint64_t budget, unsigned workers) {
  require_m(9, m, 6);
  const FieldPtr F = Field::standard(m);
  ClassificationReport rep;
  rep.degree = 9;
  rep.m = m;
  add_scan(rep, "x^9 + x^7 + A*x^5 + B*x^3", make_job(F, "x^9 + x^7 + A*x^5 + B*x^3", {}, budget, workers));
  add_scan(rep, "x^9 + A*x^6 + x^5 + B*x^3", make_job(F, "x^9 + A*x^6 + x^5 + B*x^3", {}, budget, workers));
  add_scan(rep, "x^9 + A*x^6 + B*x^3", make_job(F, "x^9 + A*x^6 + B*x^3", {}, budget, workers));
  add_scan(rep, "x^9 + A*x^6 + A^2*x^3, A != 0", make_job(F, "x^9 + A*x^6 + A^2*x^3", {'A'}, budget, workers));

  if (m <= 5) {
    const std::string full = "x^9 + A*x^7 + B*x^6 + C*x^5 + D*x^3";
    SearchResult r = scan(make_job(F, full, {}, budget, workers));
    if (r.budget_exceeded) throw Error(ErrorCode::BudgetExceeded, "full degree-9 family over budget");
    std::set<std::string> reduced;
    for (std::size_t i = 0; i < 3; ++i) {
      for (const auto& h : rep.scans[i].result.hits) reduced.insert(h.function.to_string());
    }
    std::size_t escaped = 0;
    for (const auto& h : r.hits) {
      if (!reduced.count(reduce_degree9(h.function).to_string())) ++escaped;
    }
    rep.notes.push_back("full family " + full + ": " + std::to_string(r.hits.size()) + " hits, " +
                        std::to_string(escaped) + " not mapped onto a reduced-family hit");
    rep.scans.push_back({full, make_job(F, full, {}, budget, workers), std::move(r)});
  }
  rep.references = {reference(F, 9), reference(F, 3)};
  finish(rep);
  return rep;
}

}  // namespace apn
