#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sedbn/bench.hpp"
#include "sedbn/data.hpp"
#include "sedbn/errors.hpp"
#include "sedbn/eval.hpp"
#include "sedbn/learn.hpp"
#include "sedbn/model.hpp"
#include "sedbn/sed.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kInput = 3;
constexpr int kInternal = 4;

using namespace sedbn;

std::optional<std::vector<Variable>> schema_of(const std::string& net) {
    if (net.empty()) return std::nullopt;
    return read_network(net).variables();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

MixedGraph as_cpdag(const MixedGraph& g) { return g.is_dag() ? dag_to_cpdag(g) : g; }

struct Options {
    std::string net, data, graph, truth, out, log, channel, config, base = "gmod", variables;
    std::size_t n = 1000, max_parents = 4, jobs = 0;
    std::uint64_t seed = 0;
    double alpha_max = 0.1;
    std::optional<double> rate;
    EmConfig em;
    bool cpdag = false, as_is = false;
};

int cmd_sample(const Options& o) {
    const BayesNet bn = read_network(o.net);
    const Dataset d = forward_sample(bn, o.n, o.seed);
    if (o.out.empty()) {
        write_csv(std::cout, d);
    } else {
        write_csv(o.out, d);
    }
    return 0;
}

int cmd_corrupt(const Options& o) {
    const auto schema = schema_of(o.net);
    const Dataset d = read_csv(o.data, schema);
    NoiseSpec spec;
    spec.alpha_max = o.alpha_max;
    spec.fixed_rate = o.rate;
    if (!o.variables.empty()) {
        std::string rest = o.variables;
        for (std::size_t pos; (pos = rest.find(',')) != std::string::npos; rest.erase(0, pos + 1)) {
            spec.noisy_variables.push_back(rest.substr(0, pos));
        }
        spec.noisy_variables.push_back(rest);
        for (const auto& v : spec.noisy_variables) {
            if (!d.has_column(v)) throw NodeNotFound(v);
        }
    }
    const NoiseChannel ch = spec.channel(d.schema(), o.seed);
    const Dataset noisy = corrupt(d, ch, o.seed);
    if (o.out.empty()) {
        write_csv(std::cout, noisy);
    } else {
        write_csv(o.out, noisy);
    }
    const std::string sidecar = !o.channel.empty() ? o.channel : (o.out.empty() ? "" : o.out + ".channel.json");
    if (!sidecar.empty()) write_text(sidecar, channel_to_json(ch).dump(2) + "\n");
    return 0;
}

int cmd_learn(const Options& o) {
    const Dataset d = read_csv(o.data, schema_of(o.net));
    HcConfig cfg;
    cfg.max_parents = o.max_parents;
    cfg.seed = o.seed;
    MixedGraph g = hill_climb(d, cfg);
    if (o.cpdag) g = dag_to_cpdag(g);
    write_text(o.out, format_graph(g));
    return 0;
}

int cmd_sed(const Options& o) {
    const Dataset d = read_csv(o.data, schema_of(o.net));
    const MixedGraph g = as_cpdag(import_graph(o.graph, d.schema()));
    SedConfig cfg;
    cfg.em = o.em;
    cfg.seed = o.seed;
    cfg.base = o.base == "literal" ? BasePolicy::Literal : BasePolicy::Current;
    const SedResult r = run_sed(g, d, cfg);
    write_text(o.out, format_graph(r.graph));
    if (!o.log.empty()) write_text(o.log, removal_log_to_json(r.removals).dump(2) + "\n");
    return 0;
}

int cmd_eval(const Options& o) {
    MixedGraph learned = read_graph_file(o.graph);
    MixedGraph truth = !o.truth.empty() ? read_graph_file(o.truth) : read_network(o.net).graph();
    if (!o.as_is) {
        learned = as_cpdag(learned);
        truth = as_cpdag(truth);
    }
    write_text(o.out, compare_cpdags(learned, truth).to_json().dump() + "\n");
    return 0;
}

int cmd_cliques(const Options& o) {
    const MixedGraph g = read_graph_file(o.graph);
    nlohmann::json j = {{"count", clique_count(g)}, {"cliques", nlohmann::json::array()}};
    for (const auto& t : find_3_cliques(g)) j["cliques"].push_back(t);
    write_text(o.out, j.dump() + "\n");
    return 0;
}

int cmd_bench(const Options& o) {
    BenchConfig cfg = read_bench_config(o.config);
    if (o.jobs > 0) cfg.jobs = o.jobs;
    if (!o.out.empty()) cfg.output = o.out;
    std::string text;
    for (const auto& line : run_bench(cfg)) text += line + "\n";
    write_text(cfg.output, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spurious edge detection for discrete Bayesian networks"};
    app.require_subcommand(1);
    Options o;

    auto* sample = app.add_subcommand("sample", "Forward-sample a network to CSV");
    sample->add_option("--net", o.net, "Network JSON")->required()->check(CLI::ExistingFile);
    sample->add_option("-n,--n", o.n, "Number of records")->check(CLI::PositiveNumber);
    sample->add_option("--seed", o.seed);
    sample->add_option("--out", o.out, "Output CSV (stdout if omitted)");

    auto* corrupt_cmd = app.add_subcommand("corrupt", "Apply measurement error to a dataset");
    corrupt_cmd->add_option("--data", o.data)->required()->check(CLI::ExistingFile);
    corrupt_cmd->add_option("--net", o.net, "Network JSON fixing state order")->check(CLI::ExistingFile);
    corrupt_cmd->add_option("--alpha-max", o.alpha_max, "Upper bound of per-variable error rates")
        ->check(CLI::Range(0.0, 1.0));
    corrupt_cmd->add_option("--rate", o.rate, "Fixed error rate instead of random draws")->check(CLI::Range(0.0, 1.0));
    corrupt_cmd->add_option("--variables", o.variables, "Comma-separated noisy variables (default: all)");
    corrupt_cmd->add_option("--channel", o.channel, "Channel sidecar path (default: <out>.channel.json)");
    corrupt_cmd->add_option("--seed", o.seed);
    corrupt_cmd->add_option("--out", o.out);

    auto* learn = app.add_subcommand("learn", "Hill-climb a DAG from data");
    learn->add_option("--data", o.data)->required()->check(CLI::ExistingFile);
    learn->add_option("--net", o.net)->check(CLI::ExistingFile);
    learn->add_option("--max-parents", o.max_parents);
    learn->add_flag("--cpdag", o.cpdag, "Write the equivalence class instead of the DAG");
    learn->add_option("--seed", o.seed);
    learn->add_option("--out", o.out);

    auto* sed = app.add_subcommand("sed", "Remove spurious edges from a learned graph");
    sed->add_option("--graph", o.graph)->required()->check(CLI::ExistingFile);
    sed->add_option("--data", o.data)->required()->check(CLI::ExistingFile);
    sed->add_option("--net", o.net)->check(CLI::ExistingFile);
    sed->add_option("--epsilon", o.em.epsilon)->check(CLI::PositiveNumber);
    sed->add_option("--max-iter", o.em.max_iter)->check(CLI::PositiveNumber);
    sed->add_option("--restarts", o.em.restarts)->check(CLI::PositiveNumber);
    sed->add_option("--base", o.base)->check(CLI::IsMember({"gmod", "literal"}));
    sed->add_option("--seed", o.seed);
    sed->add_option("--out", o.out);
    sed->add_option("--log", o.log, "Removal log JSON");

    auto* eval = app.add_subcommand("eval", "Compare a learned graph with the truth");
    eval->add_option("--graph", o.graph)->required()->check(CLI::ExistingFile);
    auto* truth_opt = eval->add_option("--truth", o.truth, "True graph file")->check(CLI::ExistingFile);
    auto* net_opt = eval->add_option("--net", o.net, "True network JSON")->check(CLI::ExistingFile);
    truth_opt->excludes(net_opt);
    eval->add_flag("--as-is", o.as_is, "Do not convert DAG inputs to CPDAGs");
    eval->add_option("--out", o.out);

    auto* cliques = app.add_subcommand("cliques", "List 3-vertex cliques");
    cliques->add_option("--graph", o.graph)->required()->check(CLI::ExistingFile);
    cliques->add_option("--out", o.out);

    auto* bench = app.add_subcommand("bench", "Run a benchmark sweep");
    bench->add_option("--config", o.config)->required()->check(CLI::ExistingFile);
    bench->add_option("--jobs", o.jobs);
    bench->add_option("--out", o.out, "Results file (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*sample) return cmd_sample(o);
        if (*corrupt_cmd) return cmd_corrupt(o);
        if (*learn) return cmd_learn(o);
        if (*sed) return cmd_sed(o);
        if (*eval) {
            if (o.truth.empty() && o.net.empty()) {
                std::cerr << "eval: one of --truth or --net is required\n";
                return kUsage;
            }
            return cmd_eval(o);
        }
        if (*cliques) return cmd_cliques(o);
        if (*bench) return cmd_bench(o);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kInput;
    } catch (const UnknownState& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const SchemaMismatch& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const NodeNotFound& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const NotADag& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const InvalidGraph& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}
