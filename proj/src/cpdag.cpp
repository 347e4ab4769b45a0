#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

#include "sedbn/errors.hpp"
#include "sedbn/graph.hpp"
#include "sedbn/rng.hpp"

namespace sedbn {

namespace {

using Mark = MixedGraph::Mark;

// rank[i] = position of node i in a seeded Fisher-Yates shuffle.
std::vector<std::size_t> seeded_rank(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(SeedSequence(seed).add("node-rank").value());
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    std::vector<std::size_t> rank(n);
    for (std::size_t pos = 0; pos < n; ++pos) rank[perm[pos]] = pos;
    return rank;
}

bool reaches(const MixedGraph& g, std::size_t from, std::size_t to) {
    std::vector<char> seen(g.size(), 0);
    std::vector<std::size_t> stack{from};
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (i == to) return true;
        if (seen[i]) continue;
        seen[i] = 1;
        for (auto j : g.child_indices(i)) stack.push_back(j);
    }
    return false;
}

// Orienting i -> j is admissible when it closes no directed cycle and forms
// no collider at j with a parent of j that is not adjacent to i.
bool can_orient(const MixedGraph& g, std::size_t i, std::size_t j) {
    if (reaches(g, j, i)) return false;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (k != i && g.directed(k, j) && !g.adjacent(k, i)) return false;
    }
    return true;
}

bool meek_orients(const MixedGraph& g, std::size_t i, std::size_t j) {
    const std::size_t n = g.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        // R1: k -> i -- j, k and j nonadjacent.
        if (g.directed(k, i) && !g.adjacent(k, j)) return true;
        // R2: i -> k -> j.
        if (g.directed(i, k) && g.directed(k, j)) return true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j || !g.undirected(i, k)) continue;
        for (std::size_t l = 0; l < n; ++l) {
            if (l == i || l == j || l == k) continue;
            // R3: i -- k -> j, i -- l -> j, k and l nonadjacent.
            if (l > k && g.undirected(i, l) && g.directed(k, j) && g.directed(l, j) && !g.adjacent(k, l)) return true;
            // R4: i -- k -> l -> j, i adjacent to l, k and j nonadjacent.
            if (g.directed(k, l) && g.directed(l, j) && g.adjacent(i, l) && !g.adjacent(k, j)) return true;
        }
    }
    return false;
}

std::vector<std::array<std::size_t, 3>> collider_indices(const MixedGraph& g) {
    std::vector<std::array<std::size_t, 3>> out;
    for (std::size_t c = 0; c < g.size(); ++c) {
        const auto pa = g.parent_indices(c);
        for (std::size_t x = 0; x < pa.size(); ++x) {
            for (std::size_t y = x + 1; y < pa.size(); ++y) {
                if (!g.adjacent(pa[x], pa[y])) out.push_back({pa[x], c, pa[y]});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// A DAG extends the PDAG when it keeps every directed edge, shares the
// skeleton, and has exactly the PDAG's unshielded colliders.
bool is_consistent_extension(const MixedGraph& pdag, const MixedGraph& dag) {
    if (!dag.is_dag()) return false;
    for (std::size_t i = 0; i < pdag.size(); ++i) {
        for (std::size_t j = 0; j < pdag.size(); ++j) {
            if (pdag.adjacent(i, j) != dag.adjacent(i, j)) return false;
            if (pdag.directed(i, j) && !dag.directed(i, j)) return false;
        }
    }
    return collider_indices(pdag) == collider_indices(dag);
}

std::optional<MixedGraph> meek_extension(const MixedGraph& g, std::uint64_t seed) {
    MixedGraph work = g;
    apply_meek_rules(work);
    const auto rank = seeded_rank(g.size(), seed);
    const std::size_t n = g.size();
    while (true) {
        std::optional<std::pair<std::size_t, std::size_t>> pick;
        std::pair<std::size_t, std::size_t> best_key;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!work.undirected(i, j)) continue;
                const auto lo = rank[i] < rank[j] ? i : j;
                const auto hi = lo == i ? j : i;
                std::pair key{rank[lo], rank[hi]};
                if (!pick || key < best_key) {
                    pick = std::pair{lo, hi};
                    best_key = key;
                }
            }
        }
        if (!pick) break;
        auto [lo, hi] = *pick;
        if (can_orient(work, lo, hi)) {
            work.set_mark(lo, hi, Mark::Out);
        } else if (can_orient(work, hi, lo)) {
            work.set_mark(hi, lo, Mark::Out);
        } else {
            return std::nullopt;
        }
        apply_meek_rules(work);
    }
    if (!is_consistent_extension(g, work)) return std::nullopt;
    return work;
}

}  // namespace

std::vector<Triple> v_structures(const MixedGraph& g) {
    std::vector<Triple> out;
    for (const auto& c : collider_indices(g)) {
        NodeId a = g.node(c[0]);
        NodeId b = g.node(c[2]);
        if (b < a) std::swap(a, b);
        out.push_back({a, g.node(c[1]), b});
    }
    std::sort(out.begin(), out.end());
    return out;
}

void apply_meek_rules(MixedGraph& g) {
    const std::size_t n = g.size();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || !g.undirected(i, j)) continue;
                if (meek_orients(g, i, j)) {
                    g.set_mark(i, j, Mark::Out);
                    changed = true;
                }
            }
        }
    }
}

MixedGraph dag_to_cpdag(const MixedGraph& g) {
    if (!g.is_dag()) throw NotADag("dag_to_cpdag needs a DAG");
    const std::size_t n = g.size();
    MixedGraph out = g;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (g.adjacent(i, j)) out.set_mark(i, j, Mark::Undirected);
        }
    }
    for (const auto& c : collider_indices(g)) {
        out.set_mark(c[0], c[1], Mark::Out);
        out.set_mark(c[2], c[1], Mark::Out);
    }
    apply_meek_rules(out);
    return out;
}

std::optional<MixedGraph> consistent_extension(const MixedGraph& g, std::uint64_t seed) {
    if (!g.directed_part_acyclic()) return std::nullopt;
    const std::size_t n = g.size();
    const auto rank = seeded_rank(n, seed);
    std::vector<std::size_t> by_rank(n);
    for (std::size_t i = 0; i < n; ++i) by_rank[rank[i]] = i;

    MixedGraph out = g;
    std::vector<char> alive(n, 1);
    for (std::size_t removed = 0; removed < n; ++removed) {
        std::optional<std::size_t> sink;
        for (std::size_t x : by_rank) {
            if (!alive[x]) continue;
            bool ok = true;
            for (std::size_t y = 0; y < n && ok; ++y) {
                if (alive[y] && g.directed(x, y)) ok = false;
            }
            for (std::size_t y = 0; y < n && ok; ++y) {
                if (!alive[y] || !g.undirected(x, y)) continue;
                for (std::size_t w = 0; w < n && ok; ++w) {
                    if (w != y && alive[w] && g.adjacent(x, w) && !g.adjacent(y, w)) ok = false;
                }
            }
            if (ok) {
                sink = x;
                break;
            }
        }
        if (!sink) return std::nullopt;
        for (std::size_t y = 0; y < n; ++y) {
            if (alive[y] && g.undirected(*sink, y)) out.set_mark(y, *sink, Mark::Out);
        }
        alive[*sink] = 0;
    }
    if (!is_consistent_extension(g, out)) return std::nullopt;
    return out;
}

MixedGraph cpdag_to_dag(const MixedGraph& g, std::uint64_t seed) {
    if (!g.directed_part_acyclic()) throw NotExtendable("directed part has a cycle");
    if (!g.has_undirected()) return g;
    if (auto dag = meek_extension(g, seed)) return *dag;
    if (auto dag = consistent_extension(g, seed)) return *dag;
    throw NotExtendable("no consistent extension");
}

MixedGraph extend_to_dag(const MixedGraph& g, std::uint64_t seed) {
    if (!g.directed_part_acyclic()) throw NotADag("directed part has a cycle");
    try {
        return cpdag_to_dag(g, seed);
    } catch (const NotExtendable&) {
    }
    // Kahn's algorithm over the directed part, ready nodes taken by seeded rank.
    const std::size_t n = g.size();
    const auto rank = seeded_rank(n, seed);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) indegree[j] += g.directed(i, j) ? 1 : 0;
    }
    std::set<std::pair<std::size_t, std::size_t>> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.insert({rank[i], i});
    }
    std::vector<std::size_t> position(n);
    std::size_t next = 0;
    while (!ready.empty()) {
        const std::size_t i = ready.begin()->second;
        ready.erase(ready.begin());
        position[i] = next++;
        for (std::size_t j = 0; j < n; ++j) {
            if (g.directed(i, j) && --indegree[j] == 0) ready.insert({rank[j], j});
        }
    }
    MixedGraph out = g;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!g.undirected(i, j)) continue;
            if (position[i] < position[j]) {
                out.set_mark(i, j, Mark::Out);
            } else {
                out.set_mark(j, i, Mark::Out);
            }
        }
    }
    return out;
}

}  // namespace sedbn
