#include "sedbn/bench.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>

#include "sedbn/errors.hpp"
#include "sedbn/eval.hpp"
#include "sedbn/rng.hpp"

namespace sedbn {

BayesNet BenchNetwork::load() const {
    if (path) return read_network(*path);
    if (random) return random_bn(*random, random_seed);
    throw InvalidArgument("network " + name + " has neither a path nor a random spec");
}

NoiseChannel NoiseSpec::channel(const std::vector<Variable>& vars, std::uint64_t seed) const {
    if (!fixed_rate) {
        if (noisy_variables.empty()) return draw_noise_channel(vars, alpha_max, seed);
        std::vector<Variable> subset;
        for (const auto& v : vars) {
            if (std::find(noisy_variables.begin(), noisy_variables.end(), v.name) != noisy_variables.end()) {
                subset.push_back(v);
            }
        }
        return draw_noise_channel(subset, alpha_max, seed);
    }
    std::map<NodeId, double> rates;
    for (const auto& v : vars) {
        if (noisy_variables.empty() ||
            std::find(noisy_variables.begin(), noisy_variables.end(), v.name) != noisy_variables.end()) {
            rates[v.name] = *fixed_rate;
        }
    }
    return fixed_rate_channel(vars, rates);
}

void BenchConfig::validate() const {
    if (networks.empty()) throw InvalidArgument("bench needs at least one network");
    if (sample_sizes.empty()) throw InvalidArgument("bench needs at least one sample size");
    if (seeds.empty()) throw InvalidArgument("bench needs at least one seed");
    for (auto n : sample_sizes) {
        if (n == 0) throw InvalidArgument("sample sizes must be positive");
    }
    if (jobs == 0) throw InvalidArgument("jobs must be positive");
    std::set<std::string> names;
    for (const auto& net : networks) {
        if (!names.insert(net.name).second) throw InvalidArgument("duplicate network name " + net.name);
    }
    sed.em.validate();
}

SedConfig sed_config_from_json(const nlohmann::json& j) {
    SedConfig s;
    s.em.epsilon = j.value("epsilon", s.em.epsilon);
    s.em.max_iter = j.value("max_iter", s.em.max_iter);
    s.em.restarts = j.value("restarts", s.em.restarts);
    const std::string base = j.value("base", std::string("gmod"));
    if (base == "gmod") {
        s.base = BasePolicy::Current;
    } else if (base == "literal") {
        s.base = BasePolicy::Literal;
    } else {
        throw InvalidArgument("unknown base policy " + base);
    }
    s.parallel = j.value("parallel", s.parallel);
    return s;
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
    BenchConfig c;
    try {
        for (const auto& n : j.at("networks")) {
            BenchNetwork net;
            if (n.is_string()) {
                net.path = n.get<std::string>();
                net.name = *net.path;
            } else if (n.contains("random")) {
                const auto& r = n.at("random");
                RandomNetSpec spec;
                spec.n_nodes = r.value("n_nodes", spec.n_nodes);
                spec.arity = r.value("arity", spec.arity);
                spec.max_parents = r.value("max_parents", spec.max_parents);
                spec.edge_prob = r.value("edge_prob", spec.edge_prob);
                net.random = spec;
                net.random_seed = r.value("seed", std::uint64_t{0});
                net.name = n.value("name", "random-" + std::to_string(spec.n_nodes) + "-" +
                                               std::to_string(net.random_seed));
            } else {
                net.path = n.at("path").get<std::string>();
                net.name = n.value("name", *net.path);
            }
            c.networks.push_back(std::move(net));
        }
        c.sample_sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
        c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        c.noise.alpha_max = j.value("alpha_max", c.noise.alpha_max);
        if (j.contains("fixed_rate")) c.noise.fixed_rate = j.at("fixed_rate").get<double>();
        c.noise.noisy_variables = j.value("noisy_variables", std::vector<NodeId>{});
        if (j.contains("learner")) {
            const auto& l = j.at("learner");
            c.learner = l.is_string() ? l.get<std::string>() : l.at("import").get<std::string>();
        }
        if (j.contains("hc")) c.hc.max_parents = j.at("hc").value("max_parents", c.hc.max_parents);
        if (j.contains("sed")) c.sed = sed_config_from_json(j.at("sed"));
        c.error_free = j.value("error_free", c.error_free);
        c.run_seed = j.value("seed", c.run_seed);
        c.jobs = j.value("jobs", c.jobs);
        c.output = j.value("output", c.output);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bench config: ") + e.what(), 0);
    }
    c.validate();
    return c;
}

BenchConfig read_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bench config: ") + e.what(), 0);
    }
    return bench_config_from_json(j);
}

std::uint64_t cell_seed(std::uint64_t run_seed, const std::string& network, std::size_t n, std::size_t replicate) {
    return SeedSequence(run_seed).add(network).add(n).add(replicate).value();
}

namespace {

std::string expand_pattern(std::string pattern, const std::map<std::string, std::string>& vars) {
    for (const auto& [key, value] : vars) {
        const std::string token = "{" + key + "}";
        for (auto pos = pattern.find(token); pos != std::string::npos; pos = pattern.find(token, pos + value.size())) {
            pattern.replace(pos, token.size(), value);
        }
    }
    return pattern;
}

bool edges_subset(const MixedGraph& out, const MixedGraph& in) {
    for (const auto& e : out.edges()) {
        if (!in.has_edge(e)) return false;
    }
    return true;
}

nlohmann::json run_arm(const BenchConfig& cfg, const BenchNetwork& net, const Dataset& data, const MixedGraph& truth,
                       std::size_t n, std::uint64_t replicate_seed, std::uint64_t seed, const std::string& arm) {
    MixedGraph learned;
    if (cfg.learner == "hc") {
        learned = hill_climb(data, cfg.hc);
    } else {
        const auto path = expand_pattern(cfg.learner, {{"network", net.name},
                                                       {"n", std::to_string(n)},
                                                       {"seed", std::to_string(replicate_seed)},
                                                       {"data", arm}});
        learned = import_graph(path, data.schema());
    }
    const MixedGraph original = learned.is_dag() ? dag_to_cpdag(learned) : learned;
    SedConfig sed_cfg = cfg.sed;
    sed_cfg.seed = seed;
    const SedResult sed = run_sed(original, data, sed_cfg);
    return {{"original", compare_cpdags(original, truth).to_json()},
            {"modified", compare_cpdags(sed.graph, truth).to_json()},
            {"removals", removal_log_to_json(sed.removals)},
            {"reconstructions", sed.reconstructions},
            {"sed_subset", edges_subset(sed.graph, original)}};
}

}  // namespace

nlohmann::json run_cell(const BenchConfig& cfg, const BenchNetwork& net, const BayesNet& bn, std::size_t n,
                        std::size_t replicate) {
    const std::uint64_t seed = cell_seed(cfg.run_seed, net.name, n, replicate);
    const Dataset clean = forward_sample(bn, n, SeedSequence(seed).add("sample").value());
    const NoiseChannel ch = cfg.noise.channel(bn.variables(), SeedSequence(seed).add("channel").value());
    const Dataset noisy = corrupt(clean, ch, SeedSequence(seed).add("corrupt").value());
    const MixedGraph truth = dag_to_cpdag(bn.graph());
    const std::uint64_t sed_seed = SeedSequence(seed).add("sed").value();

    nlohmann::json cell = {{"network", net.name},
                           {"n", n},
                           {"replicate", replicate},
                           {"seed", cfg.seeds[replicate]},
                           {"cell_seed", seed},
                           {"true_cliques", clique_count(truth)}};
    cell["noisy"] = run_arm(cfg, net, noisy, truth, n, cfg.seeds[replicate], sed_seed, "noisy");
    if (cfg.error_free) cell["error_free"] = run_arm(cfg, net, clean, truth, n, cfg.seeds[replicate], sed_seed, "error_free");
    return cell;
}

std::vector<std::string> run_bench(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<BayesNet> nets;
    for (const auto& net : cfg.networks) nets.push_back(net.load());

    struct Job {
        std::size_t net, n, replicate;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < cfg.networks.size(); ++i) {
        for (auto n : cfg.sample_sizes) {
            for (std::size_t r = 0; r < cfg.seeds.size(); ++r) jobs.push_back({i, n, r});
        }
    }
    std::vector<std::string> lines(jobs.size());
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(static_cast<int>(cfg.jobs))
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        const auto& job = jobs[static_cast<std::size_t>(k)];
        try {
            lines[static_cast<std::size_t>(k)] =
                run_cell(cfg, cfg.networks[job.net], nets[job.net], job.n, job.replicate).dump();
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return lines;
}

}  // namespace sedbn
