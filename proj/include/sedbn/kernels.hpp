#pragma once

// Data-parallel inner loops. Every kernel has a serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel`; the two are
// checked against each other in tests and compared in bench/.

#include <cstdint>
#include <span>
#include <vector>

#include "sedbn/variable.hpp"

namespace sedbn::kernels {

struct FamilyColumns {
    std::span<const StateIndex> child;
    std::size_t child_cardinality = 0;
    std::vector<std::span<const StateIndex>> parents;
    std::vector<std::size_t> parent_cardinalities;

    std::size_t configurations() const;
};

/// One latent variable H with its Markov blanket projected onto distinct
/// observed patterns. For pattern p:
///   hidden_row[p]            row of P(H | pa(H))
///   children[c].row[p*R + h] row of P(c | pa(c)) when H = h
///   children[c].state[p]     observed state of child c
struct LatentLayout {
    struct Child {
        std::size_t cardinality = 0;
        std::size_t configurations = 0;
        std::vector<std::uint32_t> row;
        std::vector<StateIndex> state;
    };

    std::size_t hidden_cardinality = 0;
    std::size_t hidden_configurations = 1;
    std::vector<double> weights;
    std::vector<std::uint32_t> hidden_row;
    std::vector<Child> children;

    std::size_t num_patterns() const noexcept { return weights.size(); }
};

// Flat row-major CPT blocks for the families that touch the latent variable.
struct LatentTables {
    std::vector<double> hidden;
    std::vector<std::vector<double>> children;

    static LatentTables zeros_like(const LatentLayout& layout);
    void fill(double value);
};

// Unnormalized joint of H = h and pattern p under `theta`.
double joint_weight(const LatentLayout& layout, const LatentTables& theta, std::size_t p, std::size_t h);

// Posterior over H for pattern p; uniform when every joint weight is zero.
void posterior(const LatentLayout& layout, const LatentTables& theta, std::size_t p, std::span<double> out);

namespace serial {

void family_counts(const FamilyColumns& family, std::span<std::uint64_t> out);

// E-step: fills expected counts and returns Σ_p w_p · log Σ_h joint(p, h).
double expected_counts(const LatentLayout& layout, const LatentTables& theta, LatentTables& out);

}  // namespace serial

namespace parallel {

void family_counts(const FamilyColumns& family, std::span<std::uint64_t> out);

double expected_counts(const LatentLayout& layout, const LatentTables& theta, LatentTables& out);

}  // namespace parallel

}  // namespace sedbn::kernels
