#include "sedbn/eval.hpp"

#include <set>

#include "sedbn/errors.hpp"

namespace sedbn {

namespace {

void check_same_nodes(const MixedGraph& a, const MixedGraph& b) {
    const std::set<NodeId> na(a.nodes().begin(), a.nodes().end());
    const std::set<NodeId> nb(b.nodes().begin(), b.nodes().end());
    if (na != nb) throw SchemaMismatch("graphs have different node sets");
}

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
    return {{"tp", tp},
            {"fp", fp},
            {"fn", fn},
            {"precision", precision},
            {"recall", recall},
            {"f1", f1},
            {"shd", shd},
            {"cliques_learned", cliques_learned},
            {"cliques_true", cliques_true}};
}

std::size_t shd(const MixedGraph& a, const MixedGraph& b) {
    check_same_nodes(a, b);
    const std::size_t n = a.size();
    std::size_t d = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bi = b.index_of(a.node(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t bj = b.index_of(a.node(j));
            if (a.mark(i, j) != b.mark(bi, bj)) ++d;
        }
    }
    return d;
}

std::size_t clique_count(const MixedGraph& g) { return find_3_cliques(g).size(); }

EvalReport compare_cpdags(const MixedGraph& learned, const MixedGraph& truth) {
    check_same_nodes(learned, truth);
    EvalReport r;
    for (const auto& e : learned.edges()) {
        if (truth.has_edge(e)) ++r.tp;
    }
    r.fp = learned.num_edges() - r.tp;
    r.fn = truth.num_edges() - r.tp;
    r.precision = ratio(r.tp, r.tp + r.fp);
    r.recall = ratio(r.tp, r.tp + r.fn);
    r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    r.shd = shd(learned, truth);
    r.cliques_learned = clique_count(learned);
    r.cliques_true = clique_count(truth);
    return r;
}

}  // namespace sedbn
