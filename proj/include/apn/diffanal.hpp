#pragma once

// Differential uniformity, the APN predicate and the Walsh fingerprint.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "apn/funcrep.hpp"

namespace apn {

struct DifferentialSpectrum {
  /// Solution count -> number of pairs (a != 0, b) with that count.
  std::map<unsigned, std::uint64_t> histogram;
  unsigned delta = 0;
};

DifferentialSpectrum differential_spectrum(const PolyFunc& f);
/// Same result, one thread, no OpenMP.
DifferentialSpectrum differential_spectrum_serial(const PolyFunc& f);
DifferentialSpectrum differential_spectrum(std::span<const word_t> table);
DifferentialSpectrum differential_spectrum_serial(std::span<const word_t> table);

bool is_apn(const PolyFunc& f);

/// Early-abort check on a value table. `stamp` is scratch space of size q
/// that may be reused across calls.
bool is_apn_table(std::span<const word_t> table, std::vector<std::uint32_t>& stamp);

/// |W(b, u)| = |sum_x (-1)^(Tr(b f(x)) + Tr(u x))| over b != 0 and all u,
/// as value -> multiplicity.
using WalshFingerprint = std::map<std::uint64_t, std::uint64_t>;

WalshFingerprint walsh_fingerprint(const PolyFunc& f);
WalshFingerprint walsh_fingerprint_serial(const PolyFunc& f);

/// Short stable hex digest of a fingerprint.
std::string fingerprint_digest(const WalshFingerprint& fp);

}  // namespace apn
