#include <benchmark/benchmark.h>

#include <vector>

#include "sedbn/kernels.hpp"
#include "sedbn/model.hpp"
#include "sedbn/rng.hpp"

using namespace sedbn;
using namespace sedbn::kernels;

namespace {

struct Columns {
    std::vector<std::vector<StateIndex>> data;
    FamilyColumns family;
};

Columns make_columns(std::size_t rows, std::size_t parents) {
    Rng rng(1);
    Columns c;
    c.data.assign(parents + 1, std::vector<StateIndex>(rows));
    for (auto& col : c.data) {
        for (auto& v : col) v = static_cast<StateIndex>(rng() % 3);
    }
    c.family.child = c.data[0];
    c.family.child_cardinality = 3;
    for (std::size_t p = 1; p <= parents; ++p) {
        c.family.parents.emplace_back(c.data[p]);
        c.family.parent_cardinalities.push_back(3);
    }
    return c;
}

struct Latent {
    LatentLayout layout;
    LatentTables theta;
};

// Hidden node with R = 3 states, one root family, and four ternary children
// that each have one observed co-parent.
Latent make_latent(std::size_t patterns) {
    Rng rng(2);
    Latent l;
    auto& lay = l.layout;
    lay.hidden_cardinality = 3;
    lay.children.assign(4, LatentLayout::Child{3, 9, {}, {}});
    for (std::size_t p = 0; p < patterns; ++p) {
        lay.weights.push_back(1.0 + static_cast<double>(rng() % 4));
        lay.hidden_row.push_back(0);
        for (auto& child : lay.children) {
            const auto co = static_cast<std::uint32_t>(rng() % 3);
            for (std::uint32_t h = 0; h < 3; ++h) child.row.push_back(h * 3 + co);
            child.state.push_back(static_cast<StateIndex>(rng() % 3));
        }
    }
    l.theta.hidden = sample_flat_dirichlet(3, rng);
    for (std::size_t c = 0; c < lay.children.size(); ++c) {
        std::vector<double> block;
        for (std::size_t j = 0; j < 9; ++j) {
            const auto row = sample_flat_dirichlet(3, rng);
            block.insert(block.end(), row.begin(), row.end());
        }
        l.theta.children.push_back(block);
    }
    return l;
}

template <void (*Kernel)(const FamilyColumns&, std::span<std::uint64_t>)>
void BM_family_counts(benchmark::State& state) {
    const auto c = make_columns(static_cast<std::size_t>(state.range(0)), 3);
    std::vector<std::uint64_t> out(c.family.configurations() * c.family.child_cardinality);
    for (auto _ : state) {
        Kernel(c.family, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*Kernel)(const LatentLayout&, const LatentTables&, LatentTables&)>
void BM_expected_counts(benchmark::State& state) {
    const auto l = make_latent(static_cast<std::size_t>(state.range(0)));
    auto out = LatentTables::zeros_like(l.layout);
    for (auto _ : state) benchmark::DoNotOptimize(Kernel(l.layout, l.theta, out));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_family_counts<serial::family_counts>)->Name("family_counts/serial")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_family_counts<parallel::family_counts>)->Name("family_counts/parallel")->Range(1 << 10, 1 << 20);
BENCHMARK(BM_expected_counts<serial::expected_counts>)->Name("expected_counts/serial")->Range(1 << 8, 1 << 16);
BENCHMARK(BM_expected_counts<parallel::expected_counts>)->Name("expected_counts/parallel")->Range(1 << 8, 1 << 16);

BENCHMARK_MAIN();
