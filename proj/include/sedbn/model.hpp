#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "sedbn/data.hpp"
#include "sedbn/graph.hpp"
#include "sedbn/variable.hpp"

namespace sedbn {

// Conditional probability table. Rows follow the mixed-radix parent
// configuration index with the last parent varying fastest.
struct Cpt {
    NodeId child;
    std::vector<NodeId> parents;
    std::vector<std::vector<double>> table;

    const std::vector<double>& row(std::size_t j) const { return table[j]; }
    double prob(std::size_t j, std::size_t k) const { return table[j][k]; }
};

class BayesNet {
public:
    BayesNet(MixedGraph graph, std::vector<Variable> variables, std::vector<Cpt> cpts);

    const MixedGraph& graph() const noexcept { return graph_; }
    const std::vector<Variable>& variables() const noexcept { return variables_; }
    const std::vector<Cpt>& cpts() const noexcept { return cpts_; }
    const Variable& variable(const NodeId& name) const { return variables_[graph_.index_of(name)]; }
    const Cpt& cpt(const NodeId& name) const { return cpts_[graph_.index_of(name)]; }

    // Node indices in topological order.
    const std::vector<std::size_t>& order() const noexcept { return order_; }

private:
    MixedGraph graph_;
    std::vector<Variable> variables_;  // aligned with graph_.nodes()
    std::vector<Cpt> cpts_;            // aligned with graph_.nodes()
    std::vector<std::size_t> order_;
};

// Checks row sums (1e-9), entry range and row count against the parents.
void validate_cpt(const Cpt& cpt, const std::vector<Variable>& variables);

/// Per-variable measurement-error channel. matrix[l][k] = P(V^o = k | V = l);
/// the diagonal entry of row l is 1 - state_alpha[l] and alpha is the max of
/// state_alpha.
struct VariableChannel {
    NodeId variable;
    double alpha = 0.0;
    std::vector<double> state_alpha;
    std::vector<std::vector<double>> matrix;
};

struct NoiseChannel {
    std::vector<VariableChannel> variables;

    const VariableChannel* find(const NodeId& name) const;
    // Row sums, diagonal identity and alpha = max_l alpha^l.
    void validate() const;
};

Dataset forward_sample(const BayesNet& bn, std::size_t n, std::uint64_t seed);

/// alpha_i ~ U(0, alpha_max]; per-state rates U(0, alpha_i] rescaled so the
/// largest equals alpha_i; off-diagonal mass alpha_i^l * Dirichlet(1, ..., 1).
NoiseChannel draw_noise_channel(const std::vector<Variable>& vars, double alpha_max, std::uint64_t seed);

// Every state of every listed variable gets exactly `rates[name]`, spread
// evenly over the other states; unlisted variables get the identity.
NoiseChannel fixed_rate_channel(const std::vector<Variable>& vars, const std::map<NodeId, double>& rates);

// Resamples every cell from its channel row; columns without a channel row pass through.
Dataset corrupt(const Dataset& data, const NoiseChannel& channel, std::uint64_t seed);

struct RandomNetSpec {
    std::size_t n_nodes = 20;
    std::size_t arity = 2;
    std::size_t max_parents = 3;
    double edge_prob = 0.15;
};

/// Nodes V1..Vn placed in a seeded random order; each earlier node becomes a
/// parent with probability edge_prob, keeping the first max_parents hits.
/// CPT rows ~ Dirichlet(1, ..., 1).
BayesNet random_bn(const RandomNetSpec& spec, std::uint64_t seed);

nlohmann::json network_to_json(const BayesNet& bn);
BayesNet network_from_json(const nlohmann::json& j);
BayesNet read_network(const std::string& path);
void write_network(const std::string& path, const BayesNet& bn);

nlohmann::json channel_to_json(const NoiseChannel& ch);
NoiseChannel channel_from_json(const nlohmann::json& j);

}  // namespace sedbn
