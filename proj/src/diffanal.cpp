#include "apn/diffanal.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>

#include <omp.h>

namespace apn {

namespace {

void check_table(std::span<const word_t> table) {
  if (table.size() < 2 || (table.size() & (table.size() - 1)) != 0) {
    throw Error(ErrorCode::InvalidParameters, "value table size must be a power of two");
  }
}

// Tallies the row of derivative a into cnt and folds the counts into hist.
void spectrum_row(std::span<const word_t> t, std::size_t a, std::vector<std::uint32_t>& cnt,
                  std::vector<std::uint64_t>& hist) {
  std::fill(cnt.begin(), cnt.end(), 0);
  for (std::size_t x = 0; x < t.size(); ++x) ++cnt[t[x] ^ t[x ^ a]];
  for (auto c : cnt) ++hist[c];
}

DifferentialSpectrum from_hist(const std::vector<std::uint64_t>& hist) {
  DifferentialSpectrum s;
  for (std::size_t c = 0; c < hist.size(); ++c) {
    if (hist[c] == 0) continue;
    s.histogram[static_cast<unsigned>(c)] = hist[c];
    s.delta = static_cast<unsigned>(c);
  }
  return s;
}

}  // namespace

DifferentialSpectrum differential_spectrum_serial(std::span<const word_t> table) {
  check_table(table);
  const std::size_t q = table.size();
  std::vector<std::uint32_t> cnt(q);
  std::vector<std::uint64_t> hist(q + 1, 0);
  for (std::size_t a = 1; a < q; ++a) spectrum_row(table, a, cnt, hist);
  return from_hist(hist);
}

DifferentialSpectrum differential_spectrum(std::span<const word_t> table) {
  check_table(table);
  const std::size_t q = table.size();
  std::vector<std::uint64_t> hist(q + 1, 0);
#pragma omp parallel
  {
    std::vector<std::uint32_t> cnt(q);
    std::vector<std::uint64_t> local(q + 1, 0);
#pragma omp for schedule(static)
    for (std::int64_t a = 1; a < static_cast<std::int64_t>(q); ++a) {
      spectrum_row(table, static_cast<std::size_t>(a), cnt, local);
    }
#pragma omp critical
    for (std::size_t c = 0; c <= q; ++c) hist[c] += local[c];
  }
  return from_hist(hist);
}

DifferentialSpectrum differential_spectrum(const PolyFunc& f) { return differential_spectrum(f.values()); }

DifferentialSpectrum differential_spectrum_serial(const PolyFunc& f) {
  return differential_spectrum_serial(f.values());
}

bool is_apn_table(std::span<const word_t> t, std::vector<std::uint32_t>& stamp) {
  const std::size_t q = t.size();
  if (stamp.size() != q) stamp.assign(q, 0);
  std::fill(stamp.begin(), stamp.end(), 0);
  // Solutions pair up as {x, x + a}; a second pair on the same b means 4 solutions.
  for (std::size_t a = 1; a < q; ++a) {
    const auto tag = static_cast<std::uint32_t>(a);
    for (std::size_t x = 0; x < q; ++x) {
      const std::size_t y = x ^ a;
      if (y < x) continue;
      const word_t b = t[x] ^ t[y];
      if (stamp[b] == tag) return false;
      stamp[b] = tag;
    }
  }
  return true;
}

bool is_apn(const PolyFunc& f) {
  const auto t = f.values();
  const std::size_t q = t.size();
  std::atomic<bool> ok{true};
#pragma omp parallel
  {
    std::vector<std::uint32_t> stamp(q, 0);
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t ai = 1; ai < static_cast<std::int64_t>(q); ++ai) {
      if (!ok.load(std::memory_order_relaxed)) continue;
      const auto a = static_cast<std::size_t>(ai);
      const auto tag = static_cast<std::uint32_t>(a);
      for (std::size_t x = 0; x < q; ++x) {
        const std::size_t y = x ^ a;
        if (y < x) continue;
        const word_t b = t[x] ^ t[y];
        if (stamp[b] == tag) {
          ok.store(false, std::memory_order_relaxed);
          break;
        }
        stamp[b] = tag;
      }
    }
  }
  return ok.load();
}

namespace {

void fwht(std::vector<std::int64_t>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int64_t a = v[j], b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

// Row b of the Walsh table. The transform over x of (-1)^Tr(b f(x)) indexed by
// the bit mask u gives sum_x (-1)^(Tr(b f(x)) + u.x); relabelling u through the
// trace pairing permutes a row without changing its multiset.
void walsh_row(const Field& F, std::span<const word_t> t, word_t b, std::vector<std::int64_t>& v,
               WalshFingerprint& out) {
  for (std::size_t x = 0; x < t.size(); ++x) v[x] = F.trace(F.mul(b, t[x])) ? -1 : 1;
  fwht(v);
  for (auto w : v) ++out[static_cast<std::uint64_t>(std::llabs(w))];
}

void check_walsh_size(const PolyFunc& f) {
  if (f.field()->m() > 16) throw Error(ErrorCode::FieldTooLarge, "Walsh fingerprint needs m <= 16");
}

}  // namespace

WalshFingerprint walsh_fingerprint_serial(const PolyFunc& f) {
  check_walsh_size(f);
  const auto t = f.values();
  const Field& F = *f.field();
  WalshFingerprint out;
  std::vector<std::int64_t> v(t.size());
  for (std::size_t b = 1; b < t.size(); ++b) walsh_row(F, t, static_cast<word_t>(b), v, out);
  return out;
}

WalshFingerprint walsh_fingerprint(const PolyFunc& f) {
  check_walsh_size(f);
  const auto t = f.values();
  const Field& F = *f.field();
  WalshFingerprint out;
#pragma omp parallel
  {
    WalshFingerprint local;
    std::vector<std::int64_t> v(t.size());
#pragma omp for schedule(static)
    for (std::int64_t b = 1; b < static_cast<std::int64_t>(t.size()); ++b) {
      walsh_row(F, t, static_cast<word_t>(b), v, local);
    }
#pragma omp critical
    for (const auto& [w, n] : local) out[w] += n;
  }
  return out;
}

std::string fingerprint_digest(const WalshFingerprint& fp) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  for (const auto& [w, n] : fp) {
    mix(w);
    mix(n);
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

}  // namespace apn
