#include "sedbn/graph.hpp"

#include <algorithm>
#include <ostream>

#include "sedbn/errors.hpp"

namespace sedbn {

bool is_valid_node_id(const NodeId& id) {
    if (id.empty()) return false;
    for (char c : id) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return false;
    }
    return id.find("->") == std::string::npos && id.find("--") == std::string::npos;
}

Edge Edge::undirected(NodeId x, NodeId y) {
    if (y < x) std::swap(x, y);
    return {std::move(x), std::move(y), Orientation::Undirected};
}

std::string Edge::to_string() const { return a + (is_directed() ? " -> " : " -- ") + b; }

bool operator==(const Edge& l, const Edge& r) {
    if (l.orientation != r.orientation) return false;
    if (l.is_directed()) return l.a == r.a && l.b == r.b;
    return l.pair() == r.pair();
}

bool operator<(const Edge& l, const Edge& r) {
    auto lp = l.pair();
    auto rp = r.pair();
    if (lp != rp) return lp < rp;
    if (l.orientation != r.orientation) return l.orientation < r.orientation;
    return l.a < r.a;
}

std::ostream& operator<<(std::ostream& os, const Edge& e) { return os << e.to_string(); }

MixedGraph::MixedGraph(const std::vector<NodeId>& nodes) {
    for (const auto& n : nodes) add_node(n);
}

std::size_t MixedGraph::add_node(const NodeId& id) {
    if (!is_valid_node_id(id)) throw InvalidGraph("invalid node label '" + id + "'");
    if (auto it = index_.find(id); it != index_.end()) return it->second;
    const std::size_t old_n = nodes_.size();
    const std::size_t n = old_n + 1;
    std::vector<Mark> marks(n * n, Mark::None);
    for (std::size_t i = 0; i < old_n; ++i) {
        std::copy_n(marks_.begin() + static_cast<std::ptrdiff_t>(i * old_n), old_n,
                    marks.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
    marks_ = std::move(marks);
    nodes_.push_back(id);
    index_.emplace(id, old_n);
    return old_n;
}

std::size_t MixedGraph::index_of(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw NodeNotFound(id);
    return it->second;
}

void MixedGraph::set_mark(std::size_t i, std::size_t j, Mark m) {
    const std::size_t n = nodes_.size();
    Mark back = Mark::None;
    switch (m) {
        case Mark::None: back = Mark::None; break;
        case Mark::Out: back = Mark::In; break;
        case Mark::In: back = Mark::Out; break;
        case Mark::Undirected: back = Mark::Undirected; break;
    }
    marks_[i * n + j] = m;
    marks_[j * n + i] = back;
}

void MixedGraph::add_edge(const Edge& e) {
    if (e.a == e.b) throw InvalidGraph("self-loop on " + e.a);
    const std::size_t i = index_of(e.a);
    const std::size_t j = index_of(e.b);
    if (adjacent(i, j)) throw InvalidGraph("duplicate edge between " + e.a + " and " + e.b);
    set_mark(i, j, e.is_directed() ? Mark::Out : Mark::Undirected);
}

void MixedGraph::remove_edge(const NodeId& x, const NodeId& y) {
    const std::size_t i = index_of(x);
    const std::size_t j = index_of(y);
    if (!adjacent(i, j)) throw EdgeNotFound("no edge between " + x + " and " + y);
    set_mark(i, j, Mark::None);
}

MixedGraph MixedGraph::without_node(const NodeId& v) const {
    const std::size_t skip = index_of(v);
    MixedGraph out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (i != skip) out.add_node(nodes_[i]);
    }
    for (const auto& e : edges()) {
        if (!e.touches(v)) out.add_edge(e);
    }
    return out;
}

bool MixedGraph::adjacent(const NodeId& x, const NodeId& y) const { return adjacent(index_of(x), index_of(y)); }

std::optional<Edge> MixedGraph::edge_between(const NodeId& x, const NodeId& y) const {
    const std::size_t i = index_of(x);
    const std::size_t j = index_of(y);
    switch (mark(i, j)) {
        case Mark::None: return std::nullopt;
        case Mark::Out: return Edge::directed(x, y);
        case Mark::In: return Edge::directed(y, x);
        case Mark::Undirected: return Edge::undirected(x, y);
    }
    return std::nullopt;
}

bool MixedGraph::has_edge(const Edge& e) const {
    if (!has_node(e.a) || !has_node(e.b)) return false;
    auto found = edge_between(e.a, e.b);
    return found && *found == e;
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            switch (mark(i, j)) {
                case Mark::None: break;
                case Mark::Out: out.push_back(Edge::directed(nodes_[i], nodes_[j])); break;
                case Mark::In: out.push_back(Edge::directed(nodes_[j], nodes_[i])); break;
                case Mark::Undirected: out.push_back(Edge::undirected(nodes_[i], nodes_[j])); break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t MixedGraph::num_edges() const {
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) count += adjacent(i, j) ? 1 : 0;
    }
    return count;
}

std::vector<std::size_t> MixedGraph::parent_indices(std::size_t j) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (directed(i, j)) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> MixedGraph::child_indices(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j) {
        if (directed(i, j)) out.push_back(j);
    }
    return out;
}

std::vector<std::size_t> MixedGraph::neighbor_indices(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j) {
        if (adjacent(i, j)) out.push_back(j);
    }
    return out;
}

std::vector<NodeId> MixedGraph::parents(const NodeId& v) const {
    std::vector<NodeId> out;
    for (auto i : parent_indices(index_of(v))) out.push_back(nodes_[i]);
    return out;
}

std::vector<NodeId> MixedGraph::children(const NodeId& v) const {
    std::vector<NodeId> out;
    for (auto j : child_indices(index_of(v))) out.push_back(nodes_[j]);
    return out;
}

bool MixedGraph::has_undirected() const {
    return std::any_of(marks_.begin(), marks_.end(), [](Mark m) { return m == Mark::Undirected; });
}

bool MixedGraph::directed_part_acyclic() const {
    const std::size_t n = size();
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) indegree[j] += directed(i, j) ? 1 : 0;
    }
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) stack.push_back(i);
    }
    std::size_t seen = 0;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        ++seen;
        for (std::size_t j = 0; j < n; ++j) {
            if (directed(i, j) && --indegree[j] == 0) stack.push_back(j);
        }
    }
    return seen == n;
}

bool operator==(const MixedGraph& l, const MixedGraph& r) {
    if (l.size() != r.size()) return false;
    for (const auto& n : l.nodes()) {
        if (!r.has_node(n)) return false;
    }
    return l.edges() == r.edges();
}

std::set<NodeId> neighbors(const MixedGraph& g, const NodeId& v) {
    std::set<NodeId> out;
    for (auto j : g.neighbor_indices(g.index_of(v))) out.insert(g.node(j));
    return out;
}

std::vector<Triple> find_3_cliques(const MixedGraph& g) {
    std::vector<Triple> out;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!g.adjacent(i, j)) continue;
            for (std::size_t k = j + 1; k < n; ++k) {
                if (g.adjacent(i, k) && g.adjacent(j, k)) {
                    Triple t{g.node(i), g.node(j), g.node(k)};
                    std::sort(t.begin(), t.end());
                    out.push_back(std::move(t));
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> topological_order(const MixedGraph& g) {
    const std::size_t n = g.size();
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) indegree[j] += g.directed(i, j) ? 1 : 0;
    }
    // Lowest index first among ready nodes keeps the order deterministic.
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.insert(i);
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const std::size_t i = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (g.directed(i, j) && --indegree[j] == 0) ready.insert(j);
        }
    }
    if (order.size() != n) throw NotADag("directed cycle");
    return order;
}

NodeId noisy_label(const NodeId& v) { return v + "^o"; }

MixedGraph augment_with_noisy_children(const MixedGraph& g, const std::set<NodeId>& noisy) {
    MixedGraph out = g;
    for (const auto& v : noisy) {
        g.index_of(v);
        out.add_node(noisy_label(v));
        out.add_directed(v, noisy_label(v));
    }
    return out;
}

}  // namespace sedbn
