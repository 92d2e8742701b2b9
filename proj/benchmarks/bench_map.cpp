#include <benchmark/benchmark.h>

#include "skewlab/branch.hpp"
#include "skewlab/map.hpp"
#include "skewlab/rng.hpp"

using namespace skewlab;

namespace {

void BM_ForwardOrbit(benchmark::State& state) {
    MapParams mp(0.3);
    RngStream rng(42, 0);
    DyadicX x = rng.uniform_dyadic(256);
    const unsigned steps = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        BitView bv(x);
        double y = 0.37;
        for (unsigned t = 0; t < steps; ++t) y = mod1(y + mp.c / bv.dist_to_half_at(t));
        benchmark::DoNotOptimize(y);
    }
    state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_ForwardOrbit)->Arg(18)->Arg(64);

void BM_PreimageWord(benchmark::State& state) {
    MapParams mp(0.3);
    RngStream rng(42, 1);
    TorusPoint p(rng.uniform_dyadic(256), 0.5);
    BranchWord w = BranchWord::from_value(0x5A3C7, 20);
    for (auto _ : state) {
        TorusPoint z = preimage_word(p, w, mp);
        benchmark::DoNotOptimize(z.y);
    }
}
BENCHMARK(BM_PreimageWord);

void BM_SegmentLength(benchmark::State& state) {
    MapParams mp(0.25);
    HSegment seg = HSegment::from_doubles(0.1, 0.2, 0.5, 64);
    BranchWord w = BranchWord::from_value(0xB5, 8);
    for (auto _ : state) {
        auto rep = preimage_segment_length(seg, w, mp);
        benchmark::DoNotOptimize(rep.measured_length);
    }
}
BENCHMARK(BM_SegmentLength);

}  // namespace

BENCHMARK_MAIN();
