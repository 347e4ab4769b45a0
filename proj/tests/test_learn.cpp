#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "sedbn/errors.hpp"
#include "sedbn/learn.hpp"
#include "sedbn/model.hpp"
#include "sedbn/score.hpp"
#include "support.hpp"

using namespace sedbn;
using testing::fixture;

TEST_CASE("independent columns give the empty graph") {
    int empty = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        MixedGraph g(testing::letters(4));
        std::vector<Variable> vars;
        std::vector<Cpt> cpts;
        for (const auto& n : g.nodes()) {
            vars.push_back(Variable::with_states(n, 2));
            cpts.push_back(Cpt{n, {}, {{0.5, 0.5}}});
        }
        const Dataset d = forward_sample(BayesNet(g, vars, cpts), 10000, seed);
        empty += hill_climb(d).num_edges() == 0;
    }
    CHECK(empty >= 9);
}

TEST_CASE("a strong pairwise dependence is found") {
    MixedGraph g(std::vector<NodeId>{"A", "B"});
    g.add_directed("A", "B");
    const BayesNet bn(g, {Variable::with_states("A", 2), Variable::with_states("B", 2)},
                      {Cpt{"A", {}, {{0.5, 0.5}}}, Cpt{"B", {"A"}, {{0.9, 0.1}, {0.1, 0.9}}}});
    const Dataset d = forward_sample(bn, 10000, 1);
    const MixedGraph cpdag = dag_to_cpdag(hill_climb(d));
    CHECK(cpdag.num_edges() == 1);
    CHECK(cpdag.has_edge(Edge::undirected("A", "B")));
}

TEST_CASE("hill climbing invariants") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const BayesNet bn = random_bn(RandomNetSpec{10, 2, 3, 0.3}, seed);
        const Dataset d = forward_sample(bn, 3000, seed);
        HcConfig cfg;
        cfg.max_parents = 2;
        const HcResult r = hill_climb_trace(d, cfg);
        CHECK(r.graph.is_dag());
        for (const auto& n : r.graph.nodes()) CHECK(r.graph.parents(n).size() <= 2);
        for (std::size_t t = 1; t < r.bic_trace.size(); ++t) CHECK(r.bic_trace[t] > r.bic_trace[t - 1]);
        const double empty = bic_complete(MixedGraph(bn.graph().nodes()), d, 0).value;
        CHECK(r.bic_trace.front() == doctest::Approx(empty).epsilon(1e-12));
        CHECK(bic_complete(r.graph, d, 0).value == doctest::Approx(r.bic_trace.back()).epsilon(1e-12));
        CHECK(r.bic_trace.back() >= empty);
        CHECK(hill_climb(d, cfg) == r.graph);
    }
}

TEST_CASE("max_parents = 0 allows no edges") {
    const BayesNet bn = read_network(fixture("asia.json"));
    HcConfig cfg;
    cfg.max_parents = 0;
    CHECK(hill_climb(forward_sample(bn, 1000, 1), cfg).num_edges() == 0);
}

TEST_CASE("hill climbing needs data") {
    CHECK_THROWS_AS(hill_climb(Dataset(std::vector<Variable>{Variable::with_states("A", 2)})), InvalidArgument);
}

TEST_CASE("graph import and export") {
    const BayesNet bn = read_network(fixture("asia.json"));
    const std::string path = "learn_import_test.txt";
    {
        std::ofstream out(path);
        out << "tub -> either\nlung -> either\n";
    }
    const MixedGraph g = import_graph(path, bn.variables());
    CHECK(g.size() == 3);
    CHECK(g.num_edges() == 2);

    {
        std::ofstream out(path);
        out << "node asia\nnode smoke\n";
    }
    CHECK(import_graph(path, bn.variables()).num_edges() == 0);

    {
        std::ofstream out(path);
        out << "asia -> mystery\n";
    }
    CHECK_THROWS_AS(import_graph(path, bn.variables()), NodeNotFound);

    {
        std::ofstream out(path);
        out << "asia -> tub\ntub -> either\neither -> asia\n";
    }
    CHECK_THROWS_AS(import_graph(path, bn.variables()), NotADag);

    const MixedGraph cpdag = dag_to_cpdag(bn.graph());
    export_graph(path, cpdag);
    CHECK(import_graph(path, bn.variables()) == cpdag);
    std::remove(path.c_str());
}
