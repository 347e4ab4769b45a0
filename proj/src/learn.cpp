#include "sedbn/learn.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sedbn/errors.hpp"
#include "sedbn/score.hpp"

namespace sedbn {

namespace {

// Moves smaller than this are treated as float noise.
constexpr double kMinGain = 1e-9;

enum class MoveKind { Add = 0, Delete = 1, Reverse = 2 };

struct Move {
    MoveKind kind;
    std::size_t from;
    std::size_t to;
    double gain = 0.0;
};

bool reaches(const MixedGraph& g, std::size_t from, std::size_t to, std::size_t skip_a, std::size_t skip_b) {
    std::vector<char> seen(g.size(), 0);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (i == to) return true;
        if (seen[i]) continue;
        seen[i] = 1;
        for (auto j : g.child_indices(i)) {
            if (i == skip_a && j == skip_b) continue;
            stack.push_back(j);
        }
    }
    return false;
}

class Climber {
public:
    Climber(const Dataset& data, const HcConfig& cfg) : cache_(data), cfg_(cfg) {
        std::vector<NodeId> names;
        for (const auto& v : data.schema()) names.push_back(v.name);
        std::sort(names.begin(), names.end());
        for (const auto& n : names) g_.add_node(n);
        family_.resize(g_.size());
        for (std::size_t i = 0; i < g_.size(); ++i) family_[i] = family_score(i, {});
    }

    HcResult run() {
        HcResult out;
        out.bic_trace.push_back(total());
        for (std::size_t it = 0; it < cfg_.max_iterations; ++it) {
            auto moves = candidate_moves();
            if (moves.empty()) break;
            const auto n = static_cast<std::ptrdiff_t>(moves.size());
#pragma omp parallel for schedule(dynamic)
            for (std::ptrdiff_t m = 0; m < n; ++m) score(moves[static_cast<std::size_t>(m)]);
            const Move* best = nullptr;
            for (const auto& m : moves) {
                if (m.gain > kMinGain && (!best || m.gain > best->gain)) best = &m;
            }
            if (!best) break;
            apply(*best);
            out.bic_trace.push_back(total());
        }
        out.graph = g_;
        return out;
    }

private:
    std::vector<NodeId> parent_names(std::size_t j, std::optional<std::size_t> add, std::optional<std::size_t> drop) const {
        std::vector<NodeId> out;
        for (auto p : g_.parent_indices(j)) {
            if (drop && p == *drop) continue;
            out.push_back(g_.node(p));
        }
        if (add) out.push_back(g_.node(*add));
        return out;
    }

    double family_score(std::size_t j, const std::vector<NodeId>& parents) { return cache_.bic(g_.node(j), parents); }

    double total() const {
        double s = 0.0;
        for (double f : family_) s += f;
        return s;
    }

    // Legal moves in tie-break order.
    std::vector<Move> candidate_moves() const {
        const std::size_t n = g_.size();
        std::vector<Move> adds, deletes, reverses;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                if (!g_.adjacent(i, j)) {
                    if (g_.parent_indices(j).size() < cfg_.max_parents && !reaches(g_, j, i, n, n)) {
                        adds.push_back({MoveKind::Add, i, j});
                    }
                } else if (g_.directed(i, j)) {
                    deletes.push_back({MoveKind::Delete, i, j});
                    if (g_.parent_indices(i).size() < cfg_.max_parents && !reaches(g_, i, j, i, j)) {
                        reverses.push_back({MoveKind::Reverse, i, j});
                    }
                }
            }
        }
        std::vector<Move> all = std::move(adds);
        all.insert(all.end(), deletes.begin(), deletes.end());
        all.insert(all.end(), reverses.begin(), reverses.end());
        return all;
    }

    void score(Move& m) {
        switch (m.kind) {
            case MoveKind::Add:
                m.gain = family_score(m.to, parent_names(m.to, m.from, std::nullopt)) - family_[m.to];
                break;
            case MoveKind::Delete:
                m.gain = family_score(m.to, parent_names(m.to, std::nullopt, m.from)) - family_[m.to];
                break;
            case MoveKind::Reverse:
                m.gain = family_score(m.to, parent_names(m.to, std::nullopt, m.from)) - family_[m.to] +
                         family_score(m.from, parent_names(m.from, m.to, std::nullopt)) - family_[m.from];
                break;
        }
    }

    void apply(const Move& m) {
        const NodeId& a = g_.node(m.from);
        const NodeId& b = g_.node(m.to);
        switch (m.kind) {
            case MoveKind::Add:
                g_.add_directed(a, b);
                break;
            case MoveKind::Delete:
                g_.remove_edge(a, b);
                break;
            case MoveKind::Reverse:
                g_.remove_edge(a, b);
                g_.add_directed(b, a);
                family_[m.from] = family_score(m.from, parent_names(m.from, std::nullopt, std::nullopt));
                break;
        }
        family_[m.to] = family_score(m.to, parent_names(m.to, std::nullopt, std::nullopt));
    }

    FamilyScoreCache cache_;
    const HcConfig& cfg_;
    MixedGraph g_;
    std::vector<double> family_;
};

}  // namespace

HcResult hill_climb_trace(const Dataset& data, const HcConfig& cfg) {
    if (data.num_rows() == 0) throw InvalidArgument("hill_climb needs at least one row");
    return Climber(data, cfg).run();
}

MixedGraph hill_climb(const Dataset& data, const HcConfig& cfg) { return hill_climb_trace(data, cfg).graph; }

MixedGraph import_graph(const std::string& path, const std::vector<Variable>& schema) {
    MixedGraph g = read_graph_file(path);
    std::set<NodeId> known;
    for (const auto& v : schema) known.insert(v.name);
    for (const auto& n : g.nodes()) {
        if (!known.count(n)) throw NodeNotFound(n);
    }
    if (!g.directed_part_acyclic()) throw NotADag("imported graph has a directed cycle");
    return g;
}

void export_graph(const std::string& path, const MixedGraph& g) { write_graph_file(path, g); }

}  // namespace sedbn
