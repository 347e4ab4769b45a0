#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "sedbn/data.hpp"
#include "sedbn/graph.hpp"
#include "sedbn/model.hpp"

namespace sedbn {

class FamilyScoreCache;

struct EmConfig {
    double epsilon = 1e-3;  // absolute log-likelihood improvement that counts as converged
    std::size_t max_iter = 200;
    std::size_t restarts = 3;
    std::uint64_t seed = 0;

    void validate() const;
};

struct EmResult {
    std::vector<Cpt> theta;  // one CPT per graph node, hidden family included
    std::vector<double> ll_trace;  // log P(D | theta^t) of the best restart
    bool converged = false;
    std::size_t best_restart = 0;
    std::vector<double> restart_loglik;  // final log-likelihood of every restart

    double loglik() const { return ll_trace.back(); }
    const Cpt& cpt(const NodeId& child) const;
};

/// Maximum-likelihood parameters for a DAG in which exactly one node,
/// `hidden`, is absent from the data. Families not touching the hidden node
/// stay at their complete-data MLE; the hidden family and its children's
/// families are fitted by EM from Dirichlet(1, ..., 1) starts, and the best
/// restart by final log-likelihood is returned.
/// Throws InvalidReconstruction when the hidden node has no child.
EmResult em_fit(const MixedGraph& g, const Variable& hidden, const Dataset& data, const EmConfig& cfg);
// Same, reading the constant complete-data families through `cache`.
EmResult em_fit(const MixedGraph& g, const Variable& hidden, const Dataset& data, const EmConfig& cfg,
                FamilyScoreCache* cache);

// Single EM run started from `initial` (only hidden-touching families are read).
EmResult em_fit_from(const MixedGraph& g, const Variable& hidden, const Dataset& data, const std::vector<Cpt>& initial,
                     const EmConfig& cfg);

// log P(D | theta) with the hidden node summed out.
double marginal_loglik(const MixedGraph& g, const Variable& hidden, const Dataset& data, const std::vector<Cpt>& theta);

using Record = std::map<NodeId, StateIndex>;

// P(hidden | record, theta) ∝ P(h | pa(h)) · Π_children P(c | pa(c)).
std::vector<double> posterior_hidden(const std::vector<Cpt>& theta, const MixedGraph& g, const Variable& hidden,
                                     const Record& record);

}  // namespace sedbn
