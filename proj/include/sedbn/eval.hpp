#pragma once

#include <cstddef>

#include <json.hpp>

#include "sedbn/graph.hpp"

namespace sedbn {

struct EvalReport {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t shd = 0;
    std::size_t cliques_learned = 0;
    std::size_t cliques_true = 0;

    nlohmann::json to_json() const;
};

/// Edge-level comparison. A learned edge is a true positive only when the
/// truth has the same pair with the same orientation class. SHD counts node
/// pairs whose status (absent, undirected, one direction, the other) differs.
EvalReport compare_cpdags(const MixedGraph& learned, const MixedGraph& truth);

std::size_t clique_count(const MixedGraph& g);

std::size_t shd(const MixedGraph& a, const MixedGraph& b);

}  // namespace sedbn
