#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sedbn/data.hpp"
#include "sedbn/graph.hpp"
#include "sedbn/variable.hpp"

namespace sedbn {

struct HcConfig {
    std::size_t max_parents = 4;
    std::size_t max_iterations = 100000;
    std::uint64_t seed = 0;  // accepted for interface symmetry; the search is deterministic
};

struct HcResult {
    MixedGraph graph;
    std::vector<double> bic_trace;  // BIC after each accepted move, starting with the empty graph
};

/// Greedy BIC hill climbing over DAGs from the empty graph using single-edge
/// additions, deletions and reversals. Ties between equally good moves go to
/// the first move in (kind, from, to) order, with kinds ordered add < delete < reverse.
MixedGraph hill_climb(const Dataset& data, const HcConfig& cfg = {});
HcResult hill_climb_trace(const Dataset& data, const HcConfig& cfg = {});

// Reads a graph file whose nodes must all be columns of `schema`.
MixedGraph import_graph(const std::string& path, const std::vector<Variable>& schema);
void export_graph(const std::string& path, const MixedGraph& g);

}  // namespace sedbn
