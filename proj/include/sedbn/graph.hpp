#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sedbn {

using NodeId = std::string;

// Labels are non-empty, whitespace-free and never contain the edge tokens.
bool is_valid_node_id(const NodeId& id);

enum class Orientation { Directed, Undirected };

struct Edge {
    NodeId a;
    NodeId b;
    Orientation orientation = Orientation::Directed;

    static Edge directed(NodeId from, NodeId to) { return {std::move(from), std::move(to), Orientation::Directed}; }
    static Edge undirected(NodeId x, NodeId y);

    bool is_directed() const noexcept { return orientation == Orientation::Directed; }
    bool touches(const NodeId& v) const noexcept { return a == v || b == v; }

    // Endpoints in lexicographic order; identifies the unordered pair.
    std::pair<NodeId, NodeId> pair() const { return a < b ? std::pair{a, b} : std::pair{b, a}; }

    // "A -> B" or "A -- B"
    std::string to_string() const;

    friend bool operator==(const Edge& l, const Edge& r);
    friend bool operator<(const Edge& l, const Edge& r);
};

std::ostream& operator<<(std::ostream& os, const Edge& e);

// Nodes plus at most one directed or undirected edge per unordered pair.
// Stored as a dense mark matrix; graphs in this domain have at most a few
// hundred nodes.
class MixedGraph {
public:
    enum class Mark : std::uint8_t { None = 0, Out = 1, In = 2, Undirected = 3 };

    MixedGraph() = default;
    explicit MixedGraph(const std::vector<NodeId>& nodes);

    std::size_t add_node(const NodeId& id);
    bool has_node(const NodeId& id) const { return index_.count(id) != 0; }
    std::size_t index_of(const NodeId& id) const;
    const NodeId& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    void add_edge(const Edge& e);
    void add_directed(const NodeId& from, const NodeId& to) { add_edge(Edge::directed(from, to)); }
    void add_undirected(const NodeId& x, const NodeId& y) { add_edge(Edge::undirected(x, y)); }
    // Removes whatever edge joins the pair; throws EdgeNotFound when absent.
    void remove_edge(const NodeId& x, const NodeId& y);
    // Returns a copy with `v` dropped together with its edges.
    MixedGraph without_node(const NodeId& v) const;

    bool adjacent(const NodeId& x, const NodeId& y) const;
    std::optional<Edge> edge_between(const NodeId& x, const NodeId& y) const;
    bool has_edge(const Edge& e) const;
    std::vector<Edge> edges() const;
    std::size_t num_edges() const;

    std::vector<NodeId> parents(const NodeId& v) const;
    std::vector<NodeId> children(const NodeId& v) const;

    bool has_undirected() const;
    bool directed_part_acyclic() const;
    bool is_dag() const { return !has_undirected() && directed_part_acyclic(); }

    // Index-level access for the graph algorithms.
    Mark mark(std::size_t i, std::size_t j) const { return marks_[i * nodes_.size() + j]; }
    void set_mark(std::size_t i, std::size_t j, Mark m);
    bool adjacent(std::size_t i, std::size_t j) const { return mark(i, j) != Mark::None; }
    bool directed(std::size_t i, std::size_t j) const { return mark(i, j) == Mark::Out; }
    bool undirected(std::size_t i, std::size_t j) const { return mark(i, j) == Mark::Undirected; }
    std::vector<std::size_t> parent_indices(std::size_t j) const;
    std::vector<std::size_t> child_indices(std::size_t i) const;
    std::vector<std::size_t> neighbor_indices(std::size_t i) const;

    // Same node set and same edges; node order is irrelevant.
    friend bool operator==(const MixedGraph& l, const MixedGraph& r);

private:
    std::vector<NodeId> nodes_;
    std::map<NodeId, std::size_t> index_;
    std::vector<Mark> marks_;
};

using Triple = std::array<NodeId, 3>;

// All nodes adjacent to v, regardless of orientation.
std::set<NodeId> neighbors(const MixedGraph& g, const NodeId& v);

// Every pairwise-adjacent node triple, each sorted by label, list sorted.
std::vector<Triple> find_3_cliques(const MixedGraph& g);

// Topological order of the directed part; throws NotADag on a cycle.
std::vector<std::size_t> topological_order(const MixedGraph& g);

/// d-separation of x and y given z in a DAG, decided on the moralized
/// ancestral graph of {x, y} ∪ z.
bool d_separated(const MixedGraph& g, const NodeId& x, const NodeId& y, const std::set<NodeId>& z);

// Label of the observed noisy copy of `v`.
NodeId noisy_label(const NodeId& v);

// Adds v^o with the single edge v -> v^o for every v in `noisy`.
MixedGraph augment_with_noisy_children(const MixedGraph& g, const std::set<NodeId>& noisy);

// Unshielded colliders a -> c <- b of the directed part, reported as (a, c, b) with a < b.
std::vector<Triple> v_structures(const MixedGraph& g);

// Closes a PDAG under Meek rules 1-4 in place.
void apply_meek_rules(MixedGraph& g);

/// Completed PDAG of the DAG's Markov equivalence class: v-structure edges
/// are kept directed, every other edge undirected, then Meek closure.
MixedGraph dag_to_cpdag(const MixedGraph& g);

/// A member DAG of the class represented by `g`. Undirected edges are
/// oriented one at a time in a seeded order, each followed by Meek closure;
/// if that gets stuck, the Dor-Tarsi sink-elimination extension is tried.
/// Throws NotExtendable when no consistent extension exists.
MixedGraph cpdag_to_dag(const MixedGraph& g, std::uint64_t seed);

// Dor-Tarsi consistent extension of an arbitrary PDAG; nullopt if none exists.
std::optional<MixedGraph> consistent_extension(const MixedGraph& g, std::uint64_t seed);

// Like cpdag_to_dag, but PDAGs without a consistent extension are oriented
// along a seeded topological order of their directed part instead of failing.
// Used when scoring graphs that edge removals have pushed out of CPDAG form.
MixedGraph extend_to_dag(const MixedGraph& g, std::uint64_t seed);

// Graph text format: `A -> B`, `A -- B`, `node A`, `#` comments.
MixedGraph parse_graph(std::istream& in);
MixedGraph parse_graph_string(const std::string& text);
std::string format_graph(const MixedGraph& g);
MixedGraph read_graph_file(const std::string& path);
void write_graph_file(const std::string& path, const MixedGraph& g);

}  // namespace sedbn
