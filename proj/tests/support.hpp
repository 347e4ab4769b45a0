#pragma once

// Shared helpers and brute-force oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sedbn/data.hpp"
#include "sedbn/errors.hpp"
#include "sedbn/graph.hpp"
#include "sedbn/model.hpp"
#include "sedbn/rng.hpp"

namespace testing {

using namespace sedbn;

inline std::string fixture(const std::string& name) { return std::string(SEDBN_FIXTURES) + "/" + name; }

inline std::vector<NodeId> letters(std::size_t n) {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
    return out;
}

// Edges i -> j for i < j in a random permutation, each with probability p.
inline MixedGraph random_dag(std::size_t n, double p, Rng& rng) {
    auto names = letters(n);
    MixedGraph g(names);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (uniform01(rng) < p) g.add_directed(names[perm[i]], names[perm[j]]);
        }
    }
    return g;
}

inline std::set<NodeId> descendants_or_self(const MixedGraph& g, const NodeId& v) {
    std::set<NodeId> out{v};
    std::vector<NodeId> stack{v};
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (const auto& c : g.children(x)) {
            if (out.insert(c).second) stack.push_back(c);
        }
    }
    return out;
}

// d-separation by enumerating every simple path in the skeleton.
inline bool d_separated_by_paths(const MixedGraph& g, const NodeId& x, const NodeId& y, const std::set<NodeId>& z) {
    std::map<NodeId, bool> collider_open;
    for (const auto& v : g.nodes()) {
        bool open = false;
        for (const auto& d : descendants_or_self(g, v)) open = open || z.count(d);
        collider_open[v] = open;
    }
    std::vector<NodeId> path{x};
    std::set<NodeId> on_path{x};
    std::function<bool()> active_path_exists = [&]() -> bool {
        const NodeId cur = path.back();
        if (cur == y) {
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                const auto& a = path[i - 1];
                const auto& m = path[i];
                const auto& b = path[i + 1];
                const bool collider = g.has_edge(Edge::directed(a, m)) && g.has_edge(Edge::directed(b, m));
                if (collider ? !collider_open[m] : z.count(m) != 0) return false;
            }
            return true;
        }
        for (const auto& nb : neighbors(g, cur)) {
            if (on_path.count(nb)) continue;
            path.push_back(nb);
            on_path.insert(nb);
            const bool found = active_path_exists();
            on_path.erase(nb);
            path.pop_back();
            if (found) return true;
        }
        return false;
    };
    return !active_path_exists();
}

// All subsets of `pool` with at most `k` elements.
inline std::vector<std::set<NodeId>> subsets_up_to(const std::vector<NodeId>& pool, std::size_t k) {
    std::vector<std::set<NodeId>> out{{}};
    std::function<void(std::size_t, std::set<NodeId>&)> rec = [&](std::size_t start, std::set<NodeId>& cur) {
        if (cur.size() == k) return;
        for (std::size_t i = start; i < pool.size(); ++i) {
            cur.insert(pool[i]);
            out.push_back(cur);
            rec(i + 1, cur);
            cur.erase(pool[i]);
        }
    };
    std::set<NodeId> cur;
    rec(0, cur);
    return out;
}

// Binary network over `g` with CPT rows drawn from Dirichlet(1, 1).
inline BayesNet random_binary_bn(const MixedGraph& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Variable> vars;
    std::vector<Cpt> cpts;
    for (const auto& n : g.nodes()) {
        vars.push_back(Variable::with_states(n, 2));
        Cpt c{n, g.parents(n), {}};
        for (std::size_t j = 0; j < (std::size_t{1} << c.parents.size()); ++j) c.table.push_back(sample_flat_dirichlet(2, rng));
        cpts.push_back(c);
    }
    return BayesNet(g, vars, cpts);
}

inline Dataset dataset_from_rows(const std::vector<Variable>& schema, const std::vector<std::vector<StateIndex>>& rows) {
    Dataset d(schema);
    for (const auto& r : rows) d.add_row(r);
    return d;
}

// Reverses a covered edge x -> y (pa(y) = pa(x) ∪ {x}); the result is Markov equivalent.
inline bool reverse_covered_edge(MixedGraph& g, Rng& rng) {
    std::vector<Edge> covered;
    for (const auto& e : g.edges()) {
        auto pa_x = g.parents(e.a);
        pa_x.push_back(e.a);
        std::sort(pa_x.begin(), pa_x.end());
        auto pa_y = g.parents(e.b);
        std::sort(pa_y.begin(), pa_y.end());
        if (pa_x == pa_y) covered.push_back(e);
    }
    if (covered.empty()) return false;
    const Edge e = covered[rng() % covered.size()];
    g.remove_edge(e.a, e.b);
    g.add_directed(e.b, e.a);
    return true;
}

struct LatentModel {
    MixedGraph g;
    Variable hidden;
    std::vector<Variable> observed;
    std::map<NodeId, std::size_t> card;
};

// Random DAG over up to 5 nodes with "H" hidden and at least one child of H.
inline LatentModel random_latent_model(Rng& rng) {
    for (;;) {
        const std::size_t n = 3 + rng() % 3;
        MixedGraph g = random_dag(n, 0.6, rng);
        const NodeId h = g.node(rng() % n);
        if (g.children(h).empty()) continue;
        MixedGraph renamed;
        auto rename = [&](const NodeId& x) { return x == h ? NodeId("H") : x; };
        for (const auto& v : g.nodes()) renamed.add_node(rename(v));
        for (const auto& e : g.edges()) renamed.add_directed(rename(e.a), rename(e.b));
        LatentModel m{renamed, Variable::with_states("H", 2 + rng() % 2), {}, {}};
        m.card["H"] = m.hidden.cardinality();
        for (const auto& v : renamed.nodes()) {
            if (v == "H") continue;
            m.observed.push_back(Variable::with_states(v, 2 + rng() % 2));
            m.card[v] = m.observed.back().cardinality();
        }
        return m;
    }
}

inline std::vector<Cpt> random_theta(const LatentModel& m, Rng& rng) {
    std::vector<Cpt> theta;
    for (const auto& n : m.g.nodes()) {
        Cpt c{n, m.g.parents(n), {}};
        std::size_t q = 1;
        for (const auto& p : c.parents) q *= m.card.at(p);
        for (std::size_t j = 0; j < q; ++j) c.table.push_back(sample_flat_dirichlet(m.card.at(n), rng));
        theta.push_back(c);
    }
    return theta;
}

inline const Cpt& find_cpt(const std::vector<Cpt>& theta, const NodeId& n) {
    for (const auto& c : theta)
        if (c.child == n) return c;
    throw NodeNotFound(n);
}

inline std::size_t row_index(const Cpt& c, const std::map<NodeId, std::size_t>& card, const std::map<NodeId, std::size_t>& x) {
    std::size_t j = 0;
    for (const auto& p : c.parents) j = j * card.at(p) + x.at(p);
    return j;
}

// Full joint of every node for one record and hidden state.
inline double full_joint(const LatentModel& m, const std::vector<Cpt>& theta, std::map<NodeId, std::size_t> x) {
    double p = 1;
    for (const auto& n : m.g.nodes()) {
        const Cpt& c = find_cpt(theta, n);
        p *= c.prob(row_index(c, m.card, x), x.at(n));
    }
    return p;
}

inline Dataset uniform_records(const LatentModel& m, std::size_t n, Rng& rng) {
    Dataset d(m.observed);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<StateIndex> row;
        for (const auto& v : m.observed) row.push_back(static_cast<StateIndex>(rng() % v.cardinality()));
        d.add_row(row);
    }
    return d;
}

inline std::map<NodeId, std::size_t> record_of(const Dataset& d, std::size_t r) {
    std::map<NodeId, std::size_t> x;
    for (std::size_t c = 0; c < d.num_columns(); ++c) x[d.schema()[c].name] = d.at(r, c);
    return x;
}

}  // namespace testing
