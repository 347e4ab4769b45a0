#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <json.hpp>

#include "sedbn/data.hpp"
#include "sedbn/em.hpp"
#include "sedbn/graph.hpp"
#include "sedbn/score.hpp"

namespace sedbn {

/// Candidate spurious edges per variable: the edges joining two neighbours of
/// the variable, i.e. the edges that close a 3-clique with it. Variables with
/// no such edge are absent.
using CseMap = std::map<NodeId, std::vector<Edge>>;

CseMap build_cse(const MixedGraph& g);

// Label of the latent error-free node standing in for `v` in a reconstruction.
NodeId hidden_label(const MixedGraph& g, const NodeId& v);

/// Structural part of a reconstruction: `removed` dropped, `v` renamed to a
/// hidden node that keeps all of v's edges, and `v` re-added as the hidden
/// node's only child. Orientations are left as they were.
MixedGraph reconstruct_graph(const MixedGraph& g, const NodeId& v, const std::vector<Edge>& removed);

struct ReconstructionResult {
    double delta = 0.0;  // score_r.value - score_i.value
    BicScore score_i;
    BicScore score_r;
    MixedGraph g_r;  // the scored DAG
    NodeId hidden;
    EmResult em;
};

/// Scores `g` against the reconstruction that explains `edges` by measurement
/// error on `v`. Partially directed graphs are extended to DAGs with `seed`;
/// EM restart seeds are derived from (seed, v, edges).
ReconstructionResult reconstruction(const MixedGraph& g, const NodeId& v, const std::vector<Edge>& edges,
                                    const Dataset& data, const EmConfig& cfg, std::uint64_t seed);
ReconstructionResult reconstruction(const MixedGraph& g, const NodeId& v, const std::vector<Edge>& edges,
                                    FamilyScoreCache& cache, const EmConfig& cfg, std::uint64_t seed);

enum class BasePolicy {
    Current,  // reconstruct against the graph as modified so far
    Literal,  // always reconstruct against the input graph
};

struct SedConfig {
    EmConfig em;
    std::uint64_t seed = 0;
    BasePolicy base = BasePolicy::Current;
    bool parallel = true;
};

struct Removal {
    Edge edge;
    NodeId noisy_variable;
    double delta = 0.0;
    double threshold = 0.0;  // 0 in phase 1, the running Δ_MAX in phase 2
    int phase = 1;
    std::size_t order = 0;
};

struct SedResult {
    MixedGraph graph;
    std::vector<Removal> removals;
    std::size_t reconstructions = 0;  // distinct (base, variable, edge set) evaluations
};

/// Two-phase spurious edge search. Phase 1 picks the (variable, edge) whose
/// reconstruction beats the current graph by the largest BIC margin and drops
/// that edge; phase 2 keeps attributing further edges between the same
/// variable's neighbours to its noise while the joint reconstruction keeps
/// improving. Repeats until a pass removes nothing. Edges are only ever
/// removed, never added or reoriented.
SedResult run_sed(const MixedGraph& g, const Dataset& data, const SedConfig& cfg);

nlohmann::json removal_log_to_json(const std::vector<Removal>& log);

}  // namespace sedbn
