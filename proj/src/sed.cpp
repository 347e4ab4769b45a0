#include "sedbn/sed.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <set>
#include <unordered_map>

#include "sedbn/errors.hpp"
#include "sedbn/rng.hpp"

namespace sedbn {

CseMap build_cse(const MixedGraph& g) {
    CseMap out;
    for (std::size_t v = 0; v < g.size(); ++v) {
        const auto nb = g.neighbor_indices(v);
        std::vector<Edge> edges;
        for (std::size_t x = 0; x < nb.size(); ++x) {
            for (std::size_t y = x + 1; y < nb.size(); ++y) {
                if (auto e = g.edge_between(g.node(nb[x]), g.node(nb[y]))) edges.push_back(*e);
            }
        }
        if (edges.empty()) continue;
        std::sort(edges.begin(), edges.end());
        out.emplace(g.node(v), std::move(edges));
    }
    return out;
}

NodeId hidden_label(const MixedGraph& g, const NodeId& v) {
    NodeId label = v + "*";
    while (g.has_node(label)) label += "*";
    return label;
}

namespace {

void check_candidate(const MixedGraph& g, const NodeId& v, const std::vector<Edge>& removed) {
    g.index_of(v);
    for (const auto& e : removed) {
        if (e.touches(v)) throw InvalidCandidate(e.to_string() + " touches " + v);
        if (!g.adjacent(e.a, e.b)) throw EdgeNotFound(e.to_string());
    }
}

}  // namespace

MixedGraph reconstruct_graph(const MixedGraph& g, const NodeId& v, const std::vector<Edge>& removed) {
    check_candidate(g, v, removed);
    const NodeId h = hidden_label(g, v);
    auto rename = [&](const NodeId& x) { return x == v ? h : x; };

    MixedGraph out;
    for (const auto& n : g.nodes()) out.add_node(rename(n));
    out.add_node(v);
    std::set<std::pair<NodeId, NodeId>> drop;
    for (const auto& e : removed) drop.insert(e.pair());
    for (const auto& e : g.edges()) {
        if (drop.count(e.pair())) continue;
        out.add_edge(Edge{rename(e.a), rename(e.b), e.orientation});
    }
    out.add_directed(h, v);
    return out;
}

ReconstructionResult reconstruction(const MixedGraph& g, const NodeId& v, const std::vector<Edge>& edges,
                                    FamilyScoreCache& cache, const EmConfig& cfg, std::uint64_t seed) {
    const Dataset& data = cache.data();
    for (const auto& n : g.nodes()) {
        if (!data.has_column(n)) throw SchemaMismatch("graph node " + n + " has no data column");
    }
    ReconstructionResult out;
    MixedGraph structure = reconstruct_graph(g, v, edges);
    out.hidden = hidden_label(g, v);
    out.score_i = bic_of_dag(extend_to_dag(g, seed), cache);
    out.g_r = extend_to_dag(structure, seed);

    std::vector<Edge> sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    SeedSequence em_seed(seed);
    em_seed.add(cfg.seed).add(v);
    for (const auto& e : sorted) em_seed.add(e.to_string());
    EmConfig em_cfg = cfg;
    em_cfg.seed = em_seed.value();

    Variable hidden = data.variable(v);
    hidden.name = out.hidden;
    auto scored = bic_hidden(out.g_r, hidden, cache, em_cfg);
    out.score_r = scored.score;
    out.em = std::move(scored.em);
    out.delta = out.score_r.value - out.score_i.value;
    return out;
}

ReconstructionResult reconstruction(const MixedGraph& g, const NodeId& v, const std::vector<Edge>& edges,
                                    const Dataset& data, const EmConfig& cfg, std::uint64_t seed) {
    FamilyScoreCache cache(data);
    return reconstruction(g, v, edges, cache, cfg, seed);
}

namespace {

struct Candidate {
    NodeId variable;
    std::vector<Edge> edges;  // sorted
    Edge added;               // the edge this candidate would remove next
    double delta = 0.0;
};

std::vector<std::string> edge_labels(const std::vector<Edge>& edges) {
    std::vector<std::string> out;
    for (const auto& e : edges) out.push_back(e.to_string());
    std::sort(out.begin(), out.end());
    return out;
}

class Search {
public:
    Search(const Dataset& data, const SedConfig& cfg) : cache_(data), cfg_(cfg) {}

    void evaluate(const MixedGraph& base, std::vector<Candidate>& cands) {
        const std::string base_key = format_graph(base);
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const auto n = static_cast<std::ptrdiff_t>(cands.size());
#pragma omp parallel for schedule(dynamic) if (cfg_.parallel)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                auto& c = cands[static_cast<std::size_t>(i)];
                c.delta = delta(base, base_key, c);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }

    std::size_t reconstructions() const { return evaluations_; }

private:
    double delta(const MixedGraph& base, const std::string& base_key, const Candidate& c) {
        std::string key = base_key + "|" + c.variable;
        for (const auto& l : edge_labels(c.edges)) key += "|" + l;
        {
            std::lock_guard lock(memo_mutex_);
            if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        }
        const double d = reconstruction(base, c.variable, c.edges, cache_, cfg_.em, cfg_.seed).delta;
        std::lock_guard lock(memo_mutex_);
        if (memo_.emplace(key, d).second) ++evaluations_;
        return d;
    }

    FamilyScoreCache cache_;
    const SedConfig& cfg_;
    std::mutex memo_mutex_;
    std::unordered_map<std::string, double> memo_;
    std::size_t evaluations_ = 0;
};

// Largest delta; ties go to the lexicographically smallest (variable, edge labels).
const Candidate& best_of(const std::vector<Candidate>& cands) {
    const Candidate* best = &cands.front();
    for (const auto& c : cands) {
        if (c.delta > best->delta) {
            best = &c;
        } else if (c.delta == best->delta) {
            const auto lhs = std::pair{c.variable, edge_labels(c.edges)};
            const auto rhs = std::pair{best->variable, edge_labels(best->edges)};
            if (lhs < rhs) best = &c;
        }
    }
    return *best;
}

CseMap open_cse(const MixedGraph& g, const std::set<NodeId>& cleared) {
    CseMap cse = build_cse(g);
    for (const auto& v : cleared) cse.erase(v);
    return cse;
}

}  // namespace

SedResult run_sed(const MixedGraph& g, const Dataset& data, const SedConfig& cfg) {
    cfg.em.validate();
    for (const auto& n : g.nodes()) {
        if (!data.has_column(n)) throw SchemaMismatch("graph node " + n + " has no data column");
    }
    Search search(data, cfg);
    SedResult result{g, {}, 0};
    MixedGraph& g_mod = result.graph;
    std::set<NodeId> cleared;

    auto remove = [&](const Candidate& c, int phase, double threshold) {
        g_mod.remove_edge(c.added.a, c.added.b);
        result.removals.push_back({c.added, c.variable, c.delta, threshold, phase, result.removals.size()});
    };

    while (true) {
        const MixedGraph base = cfg.base == BasePolicy::Literal ? g : g_mod;
        std::vector<Candidate> cands;
        for (const auto& [v, edges] : open_cse(g_mod, cleared)) {
            for (const auto& e : edges) cands.push_back({v, {e}, e, 0.0});
        }
        if (cands.empty()) break;
        search.evaluate(base, cands);
        const Candidate first = best_of(cands);
        if (!(first.delta > 0.0)) break;
        remove(first, 1, 0.0);

        const NodeId& v_m = first.variable;
        std::vector<Edge> removed{first.added};
        double delta_max = first.delta;
        auto cse = open_cse(g_mod, cleared);
        if (!cse.count(v_m)) continue;
        while (cse.count(v_m)) {
            std::vector<Candidate> joint;
            for (const auto& e : cse.at(v_m)) {
                auto edges = removed;
                edges.push_back(e);
                std::sort(edges.begin(), edges.end());
                joint.push_back({v_m, std::move(edges), e, 0.0});
            }
            search.evaluate(base, joint);
            const Candidate next = best_of(joint);
            if (!(next.delta > delta_max)) break;
            remove(next, 2, delta_max);
            removed.push_back(next.added);
            delta_max = next.delta;
            cse = open_cse(g_mod, cleared);
        }
        cleared.insert(v_m);
    }
    result.reconstructions = search.reconstructions();
    return result;
}

nlohmann::json removal_log_to_json(const std::vector<Removal>& log) {
    auto out = nlohmann::json::array();
    for (const auto& r : log) {
        out.push_back({{"edge", r.edge.to_string()},
                       {"noisy_variable", r.noisy_variable},
                       {"delta", r.delta},
                       {"threshold", r.threshold},
                       {"phase", r.phase},
                       {"order", r.order}});
    }
    return out;
}

}  // namespace sedbn
