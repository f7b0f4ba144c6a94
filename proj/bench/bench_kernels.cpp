// Serial reference vs OpenMP kernels on full graded bases of a rank-2 lattice VOA.

#include "voaforms/kernels.hpp"

#include <benchmark/benchmark.h>

using namespace voaforms;

namespace {

const TruncatedVOA& host() {
    static const TruncatedVOA v(EvenLattice({{2, 1}, {1, 2}}), 5);
    return v;
}

std::vector<SparseVec> full_basis(int s) { return sparse_basis(ZLattice::standard(host().dimension(s))); }

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

// u_k v for u in V_2, v in V_2 landing in degree 4
void BM_ProductBlock(benchmark::State& st) {
    const auto a = full_basis(2);
    const auto b = full_basis(2);
    const Exec e = exec_of(st);
    for (auto _ : st) benchmark::DoNotOptimize(product_block(host(), 2, a, -1, 2, b, e));
    st.SetLabel(e == Exec::Serial ? "serial" : "parallel");
}

void BM_ProductBlockReference(benchmark::State& st) {
    const auto a = full_basis(2);
    const auto b = full_basis(2);
    for (auto _ : st) benchmark::DoNotOptimize(product_block_reference(host(), 2, a, -1, 2, b));
}

void BM_GramBlock(benchmark::State& st) {
    const auto rows = full_basis(5);
    const QMatrix& form = host().form_matrix(5);
    const Exec e = exec_of(st);
    for (auto _ : st) benchmark::DoNotOptimize(gram_block(form, rows, e));
    st.SetLabel(e == Exec::Serial ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_ProductBlock)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProductBlockReference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GramBlock)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
