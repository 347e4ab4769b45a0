#include "sedbn/score.hpp"

#include <algorithm>
#include <cmath>

#include "sedbn/errors.hpp"

namespace sedbn {

BicScore BicScore::make(double loglik, std::size_t dim, std::size_t n) {
    if (n == 0) throw InvalidArgument("BIC needs at least one record");
    BicScore s;
    s.loglik = loglik;
    s.dim = dim;
    s.n = n;
    s.value = loglik - 0.5 * std::log(static_cast<double>(n)) * static_cast<double>(dim);
    return s;
}

// Extended precision keeps equivalent DAGs equal to well below 1e-9 at N = 1e5.
double family_loglik(const SufficientStats& stats) {
    long double ll = 0.0L;
    for (std::size_t j = 0; j < stats.configurations; ++j) {
        const auto total = static_cast<long double>(stats.row_total(j));
        if (total == 0.0L) continue;
        for (std::size_t k = 0; k < stats.child_cardinality; ++k) {
            const auto c = static_cast<long double>(stats.at(j, k));
            if (c > 0.0L) ll += c * std::log(c / total);
        }
    }
    return static_cast<double>(ll);
}

double loglik_complete(const MixedGraph& g, const Dataset& data) {
    if (!g.is_dag()) throw NotADag("loglik_complete needs a DAG");
    double ll = 0.0;
    for (const auto& n : g.nodes()) ll += family_loglik(counts(data, n, g.parents(n)));
    return ll;
}

std::size_t free_parameters(const MixedGraph& g, const std::map<NodeId, std::size_t>& cardinality) {
    auto card = [&](const NodeId& n) {
        auto it = cardinality.find(n);
        if (it == cardinality.end()) throw NodeNotFound(n);
        return it->second;
    };
    std::size_t d = 0;
    for (const auto& n : g.nodes()) {
        std::size_t q = 1;
        for (const auto& p : g.parents(n)) q *= card(p);
        d += (card(n) - 1) * q;
    }
    return d;
}

namespace {

std::string family_key(const NodeId& child, const std::vector<NodeId>& sorted_parents) {
    std::string key = child;
    for (const auto& p : sorted_parents) {
        key += '\x1f';
        key += p;
    }
    return key;
}

std::map<NodeId, std::size_t> cardinalities(const Dataset& data) {
    std::map<NodeId, std::size_t> out;
    for (const auto& v : data.schema()) out[v.name] = v.cardinality();
    return out;
}

}  // namespace

double FamilyScoreCache::loglik(const NodeId& child, std::vector<NodeId> parents) {
    std::sort(parents.begin(), parents.end());
    const auto key = family_key(child, parents);
    {
        std::lock_guard lock(mutex_);
        ++lookups_;
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    // Log-likelihood does not depend on parent order; compute outside the lock.
    const double ll = family_loglik(counts(data_, child, parents));
    std::lock_guard lock(mutex_);
    memo_.emplace(key, ll);
    return ll;
}

std::size_t FamilyScoreCache::dim(const NodeId& child, const std::vector<NodeId>& parents) const {
    std::size_t q = 1;
    for (const auto& p : parents) q *= data_.variable(p).cardinality();
    return (data_.variable(child).cardinality() - 1) * q;
}

double FamilyScoreCache::bic(const NodeId& child, const std::vector<NodeId>& parents) {
    return loglik(child, parents) -
           0.5 * std::log(static_cast<double>(data_.num_rows())) * static_cast<double>(dim(child, parents));
}

double FamilyScoreCache::loglik(const MixedGraph& dag) {
    double ll = 0.0;
    for (const auto& n : dag.nodes()) ll += loglik(n, dag.parents(n));
    return ll;
}

BicScore bic_of_dag(const MixedGraph& dag, FamilyScoreCache& cache) {
    if (!dag.is_dag()) throw NotADag("bic_of_dag needs a DAG");
    for (const auto& n : dag.nodes()) {
        if (!cache.data().has_column(n)) throw NodeNotFound(n);
    }
    return BicScore::make(cache.loglik(dag), free_parameters(dag, cardinalities(cache.data())), cache.data().num_rows());
}

BicScore bic_complete(const MixedGraph& g, FamilyScoreCache& cache, std::uint64_t seed) {
    return bic_of_dag(g.has_undirected() ? cpdag_to_dag(g, seed) : g, cache);
}

BicScore bic_complete(const MixedGraph& g, const Dataset& data, std::uint64_t seed) {
    FamilyScoreCache cache(data);
    return bic_complete(g, cache, seed);
}

namespace {

HiddenBic score_hidden(const MixedGraph& g_r, const Variable& hidden, const Dataset& data, const EmConfig& cfg,
                       FamilyScoreCache* cache) {
    HiddenBic out{{}, em_fit(g_r, hidden, data, cfg, cache)};
    auto cards = cardinalities(data);
    cards[hidden.name] = hidden.cardinality();
    out.score = BicScore::make(out.em.loglik(), free_parameters(g_r, cards), data.num_rows());
    out.score.converged = out.em.converged;
    return out;
}

}  // namespace

HiddenBic bic_hidden(const MixedGraph& g_r, const Variable& hidden, const Dataset& data, const EmConfig& cfg) {
    return score_hidden(g_r, hidden, data, cfg, nullptr);
}

HiddenBic bic_hidden(const MixedGraph& g_r, const Variable& hidden, FamilyScoreCache& cache, const EmConfig& cfg) {
    return score_hidden(g_r, hidden, cache.data(), cfg, &cache);
}

}  // namespace sedbn
