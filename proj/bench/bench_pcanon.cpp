// Serial against OpenMP execution of the main kernels. Every iteration
// builds a fresh basis so that no cached forms are reused.

#include <benchmark/benchmark.h>

#include "pcanon/pcanonical.hpp"
#include "pcanon/tilting.hpp"

using namespace pcanon;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

void BM_PCanonical(benchmark::State& state, const char* type, size_t len, unsigned long p) {
  for (auto _ : state) {
    PCanonicalBasis B(CartanMatrix::named(type), exec_of(state));
    benchmark::DoNotOptimize(B.entries_up_to(p, len));
  }
  label(state);
}

void BM_Antispherical(benchmark::State& state, const char* type, size_t len, unsigned long p) {
  for (auto _ : state) {
    PCanonicalBasis B(CartanMatrix::named(type), exec_of(state));
    std::vector<Gen> J;
    for (Gen s = 0; s < B.group().rank(); ++s)
      if (B.group().system().labels()[s] != "s0") J.push_back(s);
    benchmark::DoNotOptimize(B.pkl_table(p, len, J));
  }
  label(state);
}

void BM_Tilting(benchmark::State& state, const char* type, unsigned long p, long bound) {
  for (auto _ : state) {
    TiltingCharacters T(RootDatumF::named(type), p, exec_of(state));
    benchmark::DoNotOptimize(T.table(bound));
  }
  label(state);
}

}  // namespace

BENCHMARK_CAPTURE(BM_PCanonical, B3_p2, "B3", 6, 2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PCanonical, G2_p2, "G2", 6, 2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Antispherical, A2aff_p2, "A2~", 6, 2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Tilting, SL2_p3, "SL2", 3, 40)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Tilting, SL3_p5, "SL3", 5, 15)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
