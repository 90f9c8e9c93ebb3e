#include "cusptor/congruence.hpp"
#include "cusptor/integral.hpp"
#include "cusptor/kostant.hpp"

#include <benchmark/benchmark.h>

using namespace cusptor;

namespace {

numberfield::NumberField field(const std::string& name) {
    return numberfield::load_field_file(std::string(CUSPTOR_DATA_DIR) + "/fields/" + name);
}

congruence::Level gaussian_level(const numberfield::NumberField& G, unsigned e) {
    auto p = numberfield::principal_ideal(G, numberfield::Elem{Int(1), Int(1)});
    return congruence::make_level(G, numberfield::ideal_power(G, p, e));
}

void BM_SweepKernelDC(benchmark::State& st) {
    kostant::Signature s{static_cast<int>(st.range(0)), static_cast<int>(st.range(1))};
    for (auto _ : st) benchmark::DoNotOptimize(kostant::sweep_kernel_dC_grid(s, 2, 1));
}
BENCHMARK(BM_SweepKernelDC)->Args({2, 1})->Args({1, 1})->Args({0, 2})->Unit(benchmark::kMillisecond);

void BM_BoundaryCohomology(benchmark::State& st) {
    kostant::Signature s{2, 1};
    kostant::Weight w{{1, 2}, {3}, {0}};
    for (auto _ : st) benchmark::DoNotOptimize(kostant::boundary_cohomology(s, w));
}
BENCHMARK(BM_BoundaryCohomology);

void BM_CuspTable(benchmark::State& st) {
    auto G = field("gaussian.json");
    auto L = gaussian_level(G, static_cast<unsigned>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(congruence::CuspTable(G, L.ideal).cusp_count());
}
BENCHMARK(BM_CuspTable)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_Index(benchmark::State& st) {
    auto G = field("gaussian.json");
    auto L1 = gaussian_level(G, 3), L2 = gaussian_level(G, static_cast<unsigned>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(congruence::index(G, L1, L2));
}
BENCHMARK(BM_Index)->DenseRange(4, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_SmithCohomologySym(benchmark::State& st) {
    auto G = field("gaussian.json");
    auto L = congruence::make_level(G, numberfield::principal_ideal(G, numberfield::Elem{Int(3), Int(0)}));
    auto cusp = congruence::cusp_set(G, L).at(0);
    auto rep = integral::build_rep_symd(G, static_cast<int>(st.range(0)), L, cusp);
    for (auto _ : st) benchmark::DoNotOptimize(integral::smith_cohomology(integral::total_complex(rep)));
}
BENCHMARK(BM_SmithCohomologySym)->DenseRange(1, 5, 2)->Unit(benchmark::kMicrosecond);

void BM_SmithCohomologyQuartic(benchmark::State& st) {
    auto Q = field("quartic_283.json");
    auto L = congruence::make_level(Q, numberfield::principal_ideal(Q, numberfield::Elem{Int(2), Int(0), Int(0), Int(0)}));
    auto rep = integral::build_rep_trivial(Q, L);
    for (auto _ : st) benchmark::DoNotOptimize(integral::smith_cohomology(integral::total_complex(rep)));
}
BENCHMARK(BM_SmithCohomologyQuartic)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
