#include <vector>

#include "sedbn/errors.hpp"
#include "sedbn/graph.hpp"

namespace sedbn {

bool d_separated(const MixedGraph& g, const NodeId& x, const NodeId& y, const std::set<NodeId>& z) {
    if (!g.is_dag()) throw NotADag("d-separation needs a DAG");
    const std::size_t n = g.size();
    const std::size_t xi = g.index_of(x);
    const std::size_t yi = g.index_of(y);
    if (xi == yi) throw InvalidArgument("d-separation of a node from itself");

    std::vector<char> given(n, 0);
    for (const auto& v : z) {
        const std::size_t i = g.index_of(v);
        if (i == xi || i == yi) throw InvalidArgument("conditioning set contains an endpoint");
        given[i] = 1;
    }

    // Ancestral closure of {x, y} ∪ z.
    std::vector<char> ancestral(n, 0);
    std::vector<std::size_t> stack{xi, yi};
    for (std::size_t i = 0; i < n; ++i) {
        if (given[i]) stack.push_back(i);
    }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (ancestral[i]) continue;
        ancestral[i] = 1;
        for (auto p : g.parent_indices(i)) stack.push_back(p);
    }

    // Moralize: skeleton plus married co-parents, restricted to the ancestral set.
    std::vector<std::vector<char>> moral(n, std::vector<char>(n, 0));
    for (std::size_t j = 0; j < n; ++j) {
        if (!ancestral[j]) continue;
        const auto pa = g.parent_indices(j);
        for (std::size_t a = 0; a < pa.size(); ++a) {
            moral[pa[a]][j] = moral[j][pa[a]] = 1;
            for (std::size_t b = a + 1; b < pa.size(); ++b) moral[pa[a]][pa[b]] = moral[pa[b]][pa[a]] = 1;
        }
    }

    std::vector<char> seen(n, 0);
    stack.assign({xi});
    seen[xi] = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        if (i == yi) return false;
        for (std::size_t j = 0; j < n; ++j) {
            if (moral[i][j] && ancestral[j] && !given[j] && !seen[j]) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return true;
}

}  // namespace sedbn
