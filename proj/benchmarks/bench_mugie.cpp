// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "mugie/fixtures.hpp"
#include "mugie/genloop.hpp"
#include "mugie/mutops.hpp"
#include "mugie/parser.hpp"
#include "mugie/printer.hpp"

using namespace mugie;

namespace {

void BM_ParseCorpus(benchmark::State &state) {
  const auto &corpus = fixtures::corpus();
  for (auto _ : state)
    for (const auto &cp : corpus)
      benchmark::DoNotOptimize(parse(cp.source, cp.name));
}
BENCHMARK(BM_ParseCorpus);

void BM_TypecheckCorpus(benchmark::State &state) {
  const auto &corpus = fixtures::corpus();
  for (auto _ : state)
    for (const auto &cp : corpus)
      benchmark::DoNotOptimize(typecheck(cp.program));
}
BENCHMARK(BM_TypecheckCorpus);

void BM_PrintCorpus(benchmark::State &state) {
  const auto &corpus = fixtures::corpus();
  for (auto _ : state)
    for (const auto &cp : corpus)
      benchmark::DoNotOptimize(print(cp.program));
}
BENCHMARK(BM_PrintCorpus);

void BM_Fingerprint(benchmark::State &state) {
  auto p = fixtures::corpus_program("bank.bpl").program;
  for (auto _ : state)
    benchmark::DoNotOptimize(program_fingerprint(p));
}
BENCHMARK(BM_Fingerprint);

void BM_EnumerateAllSites(benchmark::State &state) {
  const auto &corpus = fixtures::corpus();
  for (auto _ : state)
    for (const auto &cp : corpus)
      for (auto k : kAllOperators)
        benchmark::DoNotOptimize(enumerate_sites(cp.program, k));
}
BENCHMARK(BM_EnumerateAllSites);

void BM_ApplyAllSites(benchmark::State &state) {
  std::vector<std::pair<const ivl::Program *, Site>> work;
  for (const auto &cp : fixtures::corpus())
    for (auto k : kAllOperators)
      for (auto &s : enumerate_sites(cp.program, k))
        work.emplace_back(&cp.program, s);
  for (auto _ : state)
    for (const auto &[p, s] : work)
      benchmark::DoNotOptimize(apply_mutation(*p, s));
  state.SetItemsProcessed(state.iterations() * work.size());
}
BENCHMARK(BM_ApplyAllSites);

void BM_GenerateMutants(benchmark::State &state) {
  auto seed = *typecheck(fixtures::corpus_program("bank.bpl").program);
  auto spec = BatchSpec::all_operators(1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_mutants(seed, spec, "bank.bpl"));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateMutants)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
