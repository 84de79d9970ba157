#pragma once

// Exhaustive APN search over polynomial families with free coefficients,
// checkpoint/resume, and the small-degree classification scans.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "apn/diffanal.hpp"
#include "apn/funcrep.hpp"

namespace apn {

/// Default work cap: candidates * q^2 for the largest desk-scale job
/// (three free coefficients over F_64).
inline constexpr std::uint64_t kDefaultSearchBudget = std::uint64_t{1} << 30;

struct SearchJob {
  FieldPtr field;
  /// Family text with uppercase placeholders, e.g. "x^9 + A*x^6 + B*x^3".
  std::string family;
  /// Placeholders restricted to nonzero values.
  std::vector<char> nonzero;
  /// Fix a lone leading placeholder to 1 when gcd(d, q - 1) = 1.
  bool normalize_leading = true;
  /// Drop constant and power-of-2 fixed terms.
  bool strip_affine = true;
  /// Skip candidates that are q-affine (all free terms vanish to an affine map).
  bool skip_q_affine = true;
  std::uint64_t budget = kDefaultSearchBudget;
  /// First candidate index to scan (from a checkpoint).
  std::uint64_t start = 0;
  /// Worker threads; 0 keeps the OpenMP default.
  unsigned workers = 0;
};

struct SearchHit {
  std::uint64_t index = 0;
  std::vector<word_t> coeffs;  // in placeholder order
  PolyFunc function;
  unsigned delta = 0;
  WalshFingerprint fingerprint;
  std::string digest;
};

struct SearchResult {
  std::vector<char> placeholders;
  std::vector<char> fixed_to_one;  // placeholders removed by leading normalization
  std::vector<SearchHit> hits;
  std::uint64_t total = 0;          // candidates in the family
  std::uint64_t scanned = 0;        // candidates visited in this run
  std::uint64_t aborted_early = 0;  // rejected by the early-abort test
  std::uint64_t skipped = 0;        // filtered (nonzero constraint, q-affine)
  std::uint64_t cursor = 0;         // next index; == total when complete
  std::uint64_t family_hash = 0;
  bool budget_exceeded = false;
  double elapsed_seconds = 0;

  bool complete() const noexcept { return cursor == total; }
};

/// Scans candidates in ascending little-endian base-q order from job.start.
/// When the remaining work exceeds the budget, scans as many candidates as
/// fit and returns with budget_exceeded set and cursor at the first
/// unscanned index. Throws InvalidParameters on a malformed family.
SearchResult scan(const SearchJob& job);
/// Same hits and counters, one thread.
SearchResult scan_serial(const SearchJob& job);

/// Merges a resumed run into an earlier partial result.
SearchResult merge_results(const SearchResult& first, const SearchResult& rest);

/// Stable hash of everything that determines the candidate sequence.
std::uint64_t family_hash(const SearchJob& job);

/// "apn-checkpoint 1\nfamily <hex>\ncursor <n>\n".
std::string checkpoint_save(const SearchResult& result);
/// Job continuing after the checkpoint; throws CorruptCheckpoint on a
/// malformed text or a family hash that does not match `job`.
SearchJob checkpoint_resume(const SearchJob& job, const std::string& text);

/// One line of JSON: index, coefficients as hex keyed by placeholder,
/// function, delta, fingerprint digest.
std::string hit_to_jsonl(const SearchHit& hit, const std::vector<char>& placeholders);

/// The candidate at `index`, or nullopt when the filters skip it.
std::optional<PolyFunc> candidate_at(const SearchJob& job, std::uint64_t index);

struct FamilyScan {
  std::string label;
  SearchJob job;
  SearchResult result;
};

struct ReferenceFingerprint {
  std::string label;  // e.g. "x^7"
  bool apn = false;
  WalshFingerprint fingerprint;
  std::string digest;
};

struct ClassificationReport {
  unsigned degree = 0, m = 0;
  std::vector<FamilyScan> scans;
  std::vector<ReferenceFingerprint> references;
  /// Per scan, per hit: labels of references with an equal fingerprint.
  std::vector<std::vector<std::vector<std::string>>> matches;
  std::vector<std::string> notes;
  std::string caveat;

  std::size_t hit_count() const noexcept;
  /// Every hit shares the fingerprint of references[i].
  bool all_hits_match(std::size_t reference) const;
};

/// x^6 + A x^5 + B x^3. Requires m <= 7.
ClassificationReport classify_degree6(unsigned m, std::uint64_t budget = kDefaultSearchBudget,
                                      unsigned workers = 0);
/// x^7 + A x^6 + B x^5 + C x^3 (leading coefficient scaled to 1). Requires m <= 6.
ClassificationReport classify_degree7(unsigned m, std::uint64_t budget = kDefaultSearchBudget,
                                      unsigned workers = 0);
/// The reduced families x^9 + x^7 + A x^5 + B x^3, x^9 + A x^6 + x^5 + B x^3,
/// x^9 + A x^6 + B x^3, the subfamily x^9 + A x^6 + A^2 x^3, and for m <= 5
/// the full family x^9 + A x^7 + B x^6 + C x^5 + D x^3 with every full hit
/// mapped into a reduced one. Requires m <= 6.
ClassificationReport classify_degree9(unsigned m, std::uint64_t budget = kDefaultSearchBudget,
                                      unsigned workers = 0);

/// Maps x^9 + a7 x^7 + a6 x^6 + a5 x^5 + a3 x^3 by x -> l x + b and output
/// scaling into one of the three reduced degree-9 families.
PolyFunc reduce_degree9(const PolyFunc& f);

}  // namespace apn
