#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "sedbn/data.hpp"
#include "sedbn/em.hpp"
#include "sedbn/graph.hpp"

namespace sedbn {

struct BicScore {
    double loglik = 0.0;
    std::size_t dim = 0;  // Σ (r_i - 1) q_i
    std::size_t n = 0;
    double value = 0.0;  // loglik - 0.5 ln(n) dim
    bool converged = true;  // only meaningful for hidden-variable scores

    static BicScore make(double loglik, std::size_t dim, std::size_t n);
};

// Σ_jk N_ijk ln(N_ijk / N_ij), zero counts contributing nothing.
double family_loglik(const SufficientStats& stats);

// Maximum-likelihood log-likelihood of a DAG on complete data.
double loglik_complete(const MixedGraph& g, const Dataset& data);

// Free parameters of the DAG given per-node cardinalities.
std::size_t free_parameters(const MixedGraph& g, const std::map<NodeId, std::size_t>& cardinality);

/// Memoized per-family log-likelihoods for one dataset. Safe to share
/// between threads.
class FamilyScoreCache {
public:
    explicit FamilyScoreCache(const Dataset& data) : data_(data) {}

    const Dataset& data() const noexcept { return data_; }
    double loglik(const NodeId& child, std::vector<NodeId> parents);
    std::size_t dim(const NodeId& child, const std::vector<NodeId>& parents) const;
    double bic(const NodeId& child, const std::vector<NodeId>& parents);

    double loglik(const MixedGraph& dag);
    std::size_t lookups() const { return lookups_; }

private:
    const Dataset& data_;
    std::mutex mutex_;
    std::map<std::string, double> memo_;
    std::size_t lookups_ = 0;
};

/// BIC of a DAG, or of cpdag_to_dag(g, seed) when g has undirected edges.
/// Throws NotExtendable for PDAGs without a consistent extension.
BicScore bic_complete(const MixedGraph& g, const Dataset& data, std::uint64_t seed);
BicScore bic_complete(const MixedGraph& g, FamilyScoreCache& cache, std::uint64_t seed);
BicScore bic_of_dag(const MixedGraph& dag, FamilyScoreCache& cache);

struct HiddenBic {
    BicScore score;
    EmResult em;
};

/// BIC of a DAG with one hidden node, log-likelihood from EM. The hidden
/// variable's families count toward the dimension like any other.
HiddenBic bic_hidden(const MixedGraph& g_r, const Variable& hidden, const Dataset& data, const EmConfig& cfg);
HiddenBic bic_hidden(const MixedGraph& g_r, const Variable& hidden, FamilyScoreCache& cache, const EmConfig& cfg);

}  // namespace sedbn
