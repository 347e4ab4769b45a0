#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sedbn/learn.hpp"
#include "sedbn/model.hpp"
#include "sedbn/sed.hpp"

namespace sedbn {

struct BenchNetwork {
    std::string name;
    std::optional<std::string> path;  // network JSON file
    std::optional<RandomNetSpec> random;
    std::uint64_t random_seed = 0;

    BayesNet load() const;
};

struct NoiseSpec {
    double alpha_max = 0.1;
    // When set, every variable in `noisy_variables` (all when empty) gets this exact rate.
    std::optional<double> fixed_rate;
    std::vector<NodeId> noisy_variables;

    NoiseChannel channel(const std::vector<Variable>& vars, std::uint64_t seed) const;
};

struct BenchConfig {
    std::vector<BenchNetwork> networks;
    std::vector<std::size_t> sample_sizes;
    std::vector<std::uint64_t> seeds;  // one replicate per entry
    NoiseSpec noise;
    std::string learner = "hc";  // or a path pattern with {network}, {n}, {seed}, {data}
    HcConfig hc;
    SedConfig sed;
    bool error_free = true;
    std::uint64_t run_seed = 0;
    std::size_t jobs = 1;
    std::string output;

    void validate() const;
};

BenchConfig bench_config_from_json(const nlohmann::json& j);
BenchConfig read_bench_config(const std::string& path);
SedConfig sed_config_from_json(const nlohmann::json& j);

std::uint64_t cell_seed(std::uint64_t run_seed, const std::string& network, std::size_t n, std::size_t replicate);

/// One (network, n, replicate) cell: sample, corrupt, learn, convert to a
/// CPDAG, run SED, and evaluate original and modified graphs on the noisy
/// data and (optionally) on the error-free control.
nlohmann::json run_cell(const BenchConfig& cfg, const BenchNetwork& net, const BayesNet& bn, std::size_t n,
                        std::size_t replicate);

// Runs every cell and returns the result lines in factorial order.
std::vector<std::string> run_bench(const BenchConfig& cfg);

}  // namespace sedbn
