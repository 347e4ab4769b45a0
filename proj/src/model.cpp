#include "sedbn/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sedbn/errors.hpp"
#include "sedbn/rng.hpp"

namespace sedbn {

namespace {

std::size_t configurations_of(const std::vector<NodeId>& parents, const std::vector<Variable>& variables) {
    std::size_t q = 1;
    for (const auto& p : parents) {
        auto it = std::find_if(variables.begin(), variables.end(), [&](const Variable& v) { return v.name == p; });
        if (it == variables.end()) throw NodeNotFound(p);
        q *= it->cardinality();
    }
    return q;
}

}  // namespace

void validate_cpt(const Cpt& cpt, const std::vector<Variable>& variables) {
    auto child = std::find_if(variables.begin(), variables.end(), [&](const Variable& v) { return v.name == cpt.child; });
    if (child == variables.end()) throw NodeNotFound(cpt.child);
    const std::size_t q = configurations_of(cpt.parents, variables);
    if (cpt.table.size() != q) {
        throw InvalidArgument("CPT of " + cpt.child + " has " + std::to_string(cpt.table.size()) + " rows, expected " +
                              std::to_string(q));
    }
    for (const auto& row : cpt.table) {
        if (row.size() != child->cardinality()) throw InvalidArgument("CPT row width mismatch for " + cpt.child);
        double sum = 0.0;
        for (double p : row) {
            if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("CPT entry outside [0,1] for " + cpt.child);
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("CPT row does not sum to 1 for " + cpt.child);
    }
}

BayesNet::BayesNet(MixedGraph graph, std::vector<Variable> variables, std::vector<Cpt> cpts)
    : graph_(std::move(graph)) {
    if (!graph_.is_dag()) throw NotADag("network graph must be a DAG");
    if (variables.size() != graph_.size() || cpts.size() != graph_.size()) {
        throw InvalidArgument("network needs one variable and one CPT per node");
    }
    variables_.resize(graph_.size());
    cpts_.resize(graph_.size());
    std::vector<char> have_var(graph_.size(), 0), have_cpt(graph_.size(), 0);
    for (auto& v : variables) {
        v.validate();
        const std::size_t i = graph_.index_of(v.name);
        if (have_var[i]) throw InvalidArgument("duplicate variable " + v.name);
        have_var[i] = 1;
        variables_[i] = std::move(v);
    }
    for (auto& c : cpts) {
        const std::size_t i = graph_.index_of(c.child);
        if (have_cpt[i]) throw InvalidArgument("duplicate CPT for " + c.child);
        auto graph_parents = graph_.parents(c.child);
        auto listed = c.parents;
        std::sort(graph_parents.begin(), graph_parents.end());
        std::sort(listed.begin(), listed.end());
        if (graph_parents != listed) throw InvalidArgument("CPT parents of " + c.child + " differ from the graph");
        validate_cpt(c, variables_);
        have_cpt[i] = 1;
        cpts_[i] = std::move(c);
    }
    order_ = topological_order(graph_);
}

const VariableChannel* NoiseChannel::find(const NodeId& name) const {
    for (const auto& v : variables) {
        if (v.variable == name) return &v;
    }
    return nullptr;
}

void NoiseChannel::validate() const {
    for (const auto& v : variables) {
        const std::size_t r = v.matrix.size();
        if (v.state_alpha.size() != r) throw InvalidArgument("channel of " + v.variable + " has mismatched sizes");
        double max_alpha = 0.0;
        for (std::size_t l = 0; l < r; ++l) {
            if (v.matrix[l].size() != r) throw InvalidArgument("channel of " + v.variable + " is not square");
            double sum = 0.0;
            for (double p : v.matrix[l]) {
                if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("channel entry outside [0,1] for " + v.variable);
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("channel row does not sum to 1 for " + v.variable);
            if (std::abs(v.matrix[l][l] - (1.0 - v.state_alpha[l])) > 1e-12) {
                throw InvalidArgument("channel diagonal disagrees with state error rate for " + v.variable);
            }
            max_alpha = std::max(max_alpha, v.state_alpha[l]);
        }
        if (std::abs(max_alpha - v.alpha) > 1e-12) throw InvalidArgument("alpha is not the max state rate for " + v.variable);
    }
}

Dataset forward_sample(const BayesNet& bn, std::size_t n, std::uint64_t seed) {
    const auto& g = bn.graph();
    const std::size_t width = g.size();
    std::vector<std::vector<std::size_t>> parent_idx(width);
    for (std::size_t i = 0; i < width; ++i) {
        for (const auto& p : bn.cpts()[i].parents) parent_idx[i].push_back(g.index_of(p));
    }
    Rng rng(SeedSequence(seed).add("forward-sample").value());
    std::vector<std::vector<StateIndex>> cols(width, std::vector<StateIndex>(n));
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t i : bn.order()) {
            std::size_t j = 0;
            for (auto p : parent_idx[i]) j = j * bn.variables()[p].cardinality() + cols[p][row];
            cols[i][row] = static_cast<StateIndex>(sample_categorical(bn.cpts()[i].table[j], rng));
        }
    }
    return Dataset(bn.variables(), std::move(cols));
}

NoiseChannel draw_noise_channel(const std::vector<Variable>& vars, double alpha_max, std::uint64_t seed) {
    if (!(alpha_max >= 0.0 && alpha_max <= 1.0)) throw InvalidArgument("alpha_max must lie in [0, 1]");
    NoiseChannel ch;
    for (const auto& var : vars) {
        Rng rng(SeedSequence(seed).add("noise-channel").add(var.name).value());
        const std::size_t r = var.cardinality();
        VariableChannel vc;
        vc.variable = var.name;
        // 1 - U[0,1) lies in (0, 1], giving the half-open interval (0, alpha_max].
        vc.alpha = alpha_max * (1.0 - uniform01(rng));
        vc.state_alpha.resize(r);
        double top = 0.0;
        for (auto& a : vc.state_alpha) {
            a = vc.alpha * (1.0 - uniform01(rng));
            top = std::max(top, a);
        }
        for (auto& a : vc.state_alpha) a = top > 0.0 ? a * (vc.alpha / top) : 0.0;
        if (vc.alpha > 0.0) {
            // Rescaling may leave the max a hair off alpha; pin it exactly.
            auto it = std::max_element(vc.state_alpha.begin(), vc.state_alpha.end());
            *it = vc.alpha;
        }
        vc.matrix.assign(r, std::vector<double>(r, 0.0));
        for (std::size_t l = 0; l < r; ++l) {
            const auto split = sample_flat_dirichlet(r - 1, rng);
            std::size_t s = 0;
            for (std::size_t k = 0; k < r; ++k) {
                vc.matrix[l][k] = k == l ? 1.0 - vc.state_alpha[l] : vc.state_alpha[l] * split[s++];
            }
        }
        ch.variables.push_back(std::move(vc));
    }
    return ch;
}

NoiseChannel fixed_rate_channel(const std::vector<Variable>& vars, const std::map<NodeId, double>& rates) {
    NoiseChannel ch;
    for (const auto& var : vars) {
        const std::size_t r = var.cardinality();
        auto it = rates.find(var.name);
        const double rate = it == rates.end() ? 0.0 : it->second;
        if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidArgument("error rate must lie in [0, 1]");
        VariableChannel vc;
        vc.variable = var.name;
        vc.alpha = rate;
        vc.state_alpha.assign(r, rate);
        vc.matrix.assign(r, std::vector<double>(r, rate / static_cast<double>(r - 1)));
        for (std::size_t l = 0; l < r; ++l) vc.matrix[l][l] = 1.0 - rate;
        ch.variables.push_back(std::move(vc));
    }
    return ch;
}

Dataset corrupt(const Dataset& data, const NoiseChannel& channel, std::uint64_t seed) {
    for (const auto& vc : channel.variables) {
        if (!data.has_column(vc.variable)) throw SchemaMismatch("channel variable " + vc.variable + " not in data");
        if (data.variable(vc.variable).cardinality() != vc.matrix.size()) {
            throw SchemaMismatch("channel of " + vc.variable + " has the wrong number of states");
        }
    }
    std::vector<std::vector<StateIndex>> cols;
    for (std::size_t c = 0; c < data.num_columns(); ++c) {
        const auto& var = data.schema()[c];
        auto src = data.column(c);
        std::vector<StateIndex> col(src.begin(), src.end());
        if (const auto* vc = channel.find(var.name)) {
            Rng rng(SeedSequence(seed).add("corrupt").add(var.name).value());
            for (auto& cell : col) {
                if (vc->state_alpha[cell] > 0.0) cell = static_cast<StateIndex>(sample_categorical(vc->matrix[cell], rng));
            }
        }
        cols.push_back(std::move(col));
    }
    return Dataset(data.schema(), std::move(cols));
}

BayesNet random_bn(const RandomNetSpec& spec, std::uint64_t seed) {
    if (spec.n_nodes < 1) throw InvalidArgument("random_bn needs at least one node");
    if (spec.arity < 2) throw InvalidArgument("random_bn needs arity >= 2");
    Rng rng(SeedSequence(seed).add("random-bn").value());
    std::vector<NodeId> names;
    for (std::size_t i = 0; i < spec.n_nodes; ++i) names.push_back("V" + std::to_string(i + 1));

    std::vector<std::size_t> order(spec.n_nodes);
    for (std::size_t i = 0; i < spec.n_nodes; ++i) order[i] = i;
    for (std::size_t i = spec.n_nodes; i > 1; --i) std::swap(order[i - 1], order[rng() % i]);

    MixedGraph g(names);
    for (std::size_t pos = 0; pos < spec.n_nodes; ++pos) {
        std::size_t taken = 0;
        for (std::size_t earlier = 0; earlier < pos; ++earlier) {
            const bool hit = uniform01(rng) < spec.edge_prob;
            if (hit && taken < spec.max_parents) {
                g.add_directed(names[order[earlier]], names[order[pos]]);
                ++taken;
            }
        }
    }

    std::vector<Variable> vars;
    for (const auto& n : names) vars.push_back(Variable::with_states(n, spec.arity));
    std::vector<Cpt> cpts;
    for (const auto& n : names) {
        Cpt cpt{n, g.parents(n), {}};
        std::size_t q = 1;
        for (std::size_t p = 0; p < cpt.parents.size(); ++p) q *= spec.arity;
        for (std::size_t j = 0; j < q; ++j) cpt.table.push_back(sample_flat_dirichlet(spec.arity, rng));
        cpts.push_back(std::move(cpt));
    }
    return BayesNet(std::move(g), std::move(vars), std::move(cpts));
}

nlohmann::json network_to_json(const BayesNet& bn) {
    nlohmann::json j;
    j["variables"] = nlohmann::json::array();
    for (const auto& v : bn.variables()) j["variables"].push_back({{"name", v.name}, {"states", v.states}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : bn.graph().edges()) j["edges"].push_back({e.a, e.b});
    j["cpts"] = nlohmann::json::object();
    for (const auto& c : bn.cpts()) j["cpts"][c.child] = {{"parents", c.parents}, {"table", c.table}};
    return j;
}

BayesNet network_from_json(const nlohmann::json& j) {
    try {
        std::vector<Variable> vars;
        std::vector<NodeId> names;
        for (const auto& v : j.at("variables")) {
            vars.push_back(Variable{v.at("name").get<std::string>(), v.at("states").get<std::vector<std::string>>()});
            names.push_back(vars.back().name);
        }
        MixedGraph g(names);
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ParseError("edge must be [parent, child]", 0);
            g.add_directed(e[0].get<std::string>(), e[1].get<std::string>());
        }
        std::vector<Cpt> cpts;
        for (const auto& [child, c] : j.at("cpts").items()) {
            cpts.push_back(Cpt{child, c.at("parents").get<std::vector<NodeId>>(),
                               c.at("table").get<std::vector<std::vector<double>>>()});
        }
        return BayesNet(std::move(g), std::move(vars), std::move(cpts));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network file: ") + e.what(), 0);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(std::string("network file: ") + e.what(), 0);
    }
}

BayesNet read_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("network file: ") + e.what(), 0);
    }
    return network_from_json(j);
}

void write_network(const std::string& path, const BayesNet& bn) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << network_to_json(bn).dump(2) << '\n';
}

nlohmann::json channel_to_json(const NoiseChannel& ch) {
    nlohmann::json j;
    j["variables"] = nlohmann::json::array();
    for (const auto& v : ch.variables) {
        j["variables"].push_back(
            {{"name", v.variable}, {"alpha", v.alpha}, {"state_alpha", v.state_alpha}, {"matrix", v.matrix}});
    }
    return j;
}

NoiseChannel channel_from_json(const nlohmann::json& j) {
    try {
        NoiseChannel ch;
        for (const auto& v : j.at("variables")) {
            ch.variables.push_back(VariableChannel{v.at("name").get<std::string>(), v.at("alpha").get<double>(),
                                                   v.at("state_alpha").get<std::vector<double>>(),
                                                   v.at("matrix").get<std::vector<std::vector<double>>>()});
        }
        ch.validate();
        return ch;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("channel file: ") + e.what(), 0);
    }
}

}  // namespace sedbn
