#include <benchmark/benchmark.h>

#include "apn/diffanal.hpp"
#include "apn/search.hpp"
#include "apn/sigma.hpp"

using namespace apn;

namespace {

PolyFunc dobbertin_like(unsigned m) {
  return parse_function(Field::standard(m), "x^9 + 0x3*x^6 + x^5 + x^3");
}

void BM_spectrum_serial(benchmark::State& st) {
  const PolyFunc f = dobbertin_like(static_cast<unsigned>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(differential_spectrum_serial(f).delta);
}
void BM_spectrum_parallel(benchmark::State& st) {
  const PolyFunc f = dobbertin_like(static_cast<unsigned>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(differential_spectrum(f).delta);
}

void BM_walsh_serial(benchmark::State& st) {
  const PolyFunc f = dobbertin_like(static_cast<unsigned>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(walsh_fingerprint_serial(f).size());
}
void BM_walsh_parallel(benchmark::State& st) {
  const PolyFunc f = dobbertin_like(static_cast<unsigned>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(walsh_fingerprint(f).size());
}

void BM_count_serial(benchmark::State& st) {
  const SigmaSurface s = build_sigma(dobbertin_like(static_cast<unsigned>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(count_points_serial(s).projective_total);
}
void BM_count_parallel(benchmark::State& st) {
  const SigmaSurface s = build_sigma(dobbertin_like(static_cast<unsigned>(st.range(0))));
  for (auto _ : st) benchmark::DoNotOptimize(count_points(s).projective_total);
}

SearchJob job(unsigned m) {
  SearchJob j;
  j.field = Field::standard(m);
  j.family = "x^9 + A*x^6 + B*x^5 + C*x^3";
  return j;
}
void BM_scan_serial(benchmark::State& st) {
  const SearchJob j = job(static_cast<unsigned>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(scan_serial(j).hits.size());
}
void BM_scan_parallel(benchmark::State& st) {
  const SearchJob j = job(static_cast<unsigned>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(scan(j).hits.size());
}

}  // namespace

BENCHMARK(BM_spectrum_serial)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_spectrum_parallel)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_walsh_serial)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_walsh_parallel)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_count_serial)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_count_parallel)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_scan_serial)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_scan_parallel)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
