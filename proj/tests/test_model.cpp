#include <doctest.h>

#include <cmath>

#include "sedbn/errors.hpp"
#include "sedbn/model.hpp"
#include "support.hpp"

using namespace sedbn;
using testing::fixture;

namespace {

BayesNet chain_ab() {
    MixedGraph g(std::vector<NodeId>{"A", "B"});
    g.add_directed("A", "B");
    return BayesNet(g, {Variable::with_states("A", 2), Variable::with_states("B", 2)},
                    {Cpt{"A", {}, {{0.3, 0.7}}}, Cpt{"B", {"A"}, {{0.9, 0.1}, {0.2, 0.8}}}});
}

// Exact distribution of min(Binomial(n, p), cap): mean and variance.
std::pair<double, double> truncated_binomial_moments(std::size_t n, double p, std::size_t cap) {
    std::vector<double> pmf(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        pmf[k] = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) * std::pow(p, k) *
                 std::pow(1 - p, n - k);
    }
    double m1 = 0, m2 = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double v = static_cast<double>(std::min(k, cap));
        m1 += pmf[k] * v;
        m2 += pmf[k] * v * v;
    }
    return {m1, m2 - m1 * m1};
}

}  // namespace

TEST_CASE("BayesNet validation") {
    MixedGraph g(std::vector<NodeId>{"A", "B"});
    g.add_directed("A", "B");
    const std::vector<Variable> vars{Variable::with_states("A", 2), Variable::with_states("B", 2)};
    CHECK_THROWS(BayesNet(g, vars, {Cpt{"A", {}, {{0.3, 0.7}}}, Cpt{"B", {}, {{0.5, 0.5}}}}));
    CHECK_THROWS(BayesNet(g, vars, {Cpt{"A", {}, {{0.3, 0.6}}}, Cpt{"B", {"A"}, {{0.9, 0.1}, {0.2, 0.8}}}}));
    CHECK_THROWS(BayesNet(g, vars, {Cpt{"A", {}, {{0.3, 0.7}}}, Cpt{"B", {"A"}, {{0.9, 0.1}}}}));
    CHECK_NOTHROW(chain_ab());
}

TEST_CASE("network file round trip") {
    const BayesNet bn = read_network(fixture("asia.json"));
    CHECK(bn.graph() == read_graph_file(fixture("asia_true.txt")));
    const BayesNet back = network_from_json(network_to_json(bn));
    CHECK(back.graph() == bn.graph());
    for (const auto& v : bn.variables()) {
        CHECK(back.variable(v.name) == v);
        CHECK(back.cpt(v.name).table == bn.cpt(v.name).table);
    }
    CHECK_THROWS_AS(network_from_json(nlohmann::json::parse(R"({"variables": []})")), ParseError);
}

TEST_CASE("deterministic CPTs give identical records") {
    MixedGraph g(std::vector<NodeId>{"A", "B"});
    g.add_directed("A", "B");
    const BayesNet bn(g, {Variable::with_states("A", 2), Variable::with_states("B", 3)},
                      {Cpt{"A", {}, {{0.0, 1.0}}}, Cpt{"B", {"A"}, {{1.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}}});
    const Dataset d = forward_sample(bn, 500, 1);
    CHECK(d.num_rows() == 500);
    for (std::size_t r = 0; r < d.num_rows(); ++r) {
        CHECK(d.at(r, d.column_index("A")) == 1);
        CHECK(d.at(r, d.column_index("B")) == 2);
    }
}

TEST_CASE("forward sampling frequencies") {
    const BayesNet single(MixedGraph(std::vector<NodeId>{"A"}), {Variable::with_states("A", 2)},
                          {Cpt{"A", {}, {{0.3, 0.7}}}});
    const Dataset d1 = forward_sample(single, 100000, 4);
    double ones = 0;
    for (auto v : d1.column("A")) ones += v;
    CHECK(ones / 1e5 >= 0.69);
    CHECK(ones / 1e5 <= 0.71);

    const BayesNet bn = chain_ab();
    const Dataset d = forward_sample(bn, 100000, 5);
    const double joint[2][2] = {{0.3 * 0.9, 0.3 * 0.1}, {0.7 * 0.2, 0.7 * 0.8}};
    double freq[2][2] = {};
    for (std::size_t r = 0; r < d.num_rows(); ++r) freq[d.at(r, 0)][d.at(r, 1)] += 1e-5;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) CHECK(std::abs(freq[a][b] - joint[a][b]) <= 0.01);

    CHECK(forward_sample(bn, 100, 9) == forward_sample(bn, 100, 9));
    CHECK_FALSE(forward_sample(bn, 100, 9) == forward_sample(bn, 100, 10));
}

TEST_CASE("noise channel shape") {
    const std::vector<Variable> vars{Variable::with_states("A", 2), Variable::with_states("B", 3),
                                     Variable::with_states("C", 4)};
    const NoiseChannel none = draw_noise_channel(vars, 0.0, 1);
    for (const auto& v : none.variables) {
        CHECK(v.alpha == 0.0);
        for (std::size_t l = 0; l < v.matrix.size(); ++l) CHECK(v.matrix[l][l] == 1.0);
    }

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const NoiseChannel ch = draw_noise_channel(vars, 0.1, seed);
        CHECK_NOTHROW(ch.validate());
        for (const auto& v : ch.variables) {
            CHECK(v.alpha > 0.0);
            CHECK(v.alpha <= 0.1);
            CHECK(*std::max_element(v.state_alpha.begin(), v.state_alpha.end()) == doctest::Approx(v.alpha).epsilon(1e-12));
            for (std::size_t l = 0; l < v.matrix.size(); ++l) {
                double sum = 0;
                for (double x : v.matrix[l]) sum += x;
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
                CHECK(v.matrix[l][l] == doctest::Approx(1.0 - v.state_alpha[l]).epsilon(1e-12));
            }
        }
        // Binary rows put all error mass on the single other state.
        const auto& a = *ch.find("A");
        CHECK(a.matrix[0][1] == doctest::Approx(a.state_alpha[0]).epsilon(1e-12));
        CHECK(a.matrix[1][0] == doctest::Approx(a.state_alpha[1]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(draw_noise_channel(vars, 1.5, 0), InvalidArgument);
}

TEST_CASE("off-diagonal split of a 3-state channel averages one half") {
    const std::vector<Variable> vars{Variable::with_states("B", 3)};
    double ratio = 0;
    const int draws = 100000;
    for (int s = 0; s < draws; ++s) {
        const auto ch = draw_noise_channel(vars, 0.1, static_cast<std::uint64_t>(s));
        const auto& v = ch.variables[0];
        ratio += v.matrix[0][1] / v.state_alpha[0];
    }
    CHECK(std::abs(ratio / draws - 0.5) <= 0.01);
}

TEST_CASE("corrupt") {
    const BayesNet bn = read_network(fixture("asia.json"));
    const Dataset d = forward_sample(bn, 2000, 3);
    CHECK(corrupt(d, draw_noise_channel(bn.variables(), 0.0, 1), 7) == d);
    CHECK(corrupt(d, fixed_rate_channel(bn.variables(), {}), 7) == d);

    const Dataset empty(bn.variables());
    CHECK(corrupt(empty, draw_noise_channel(bn.variables(), 0.1, 1), 7).num_rows() == 0);

    const Dataset other(std::vector<Variable>{Variable::with_states("Q", 2)});
    CHECK_THROWS_AS(corrupt(other, draw_noise_channel(bn.variables(), 0.1, 1), 7), SchemaMismatch);
}

TEST_CASE("binary flip rate") {
    const BayesNet bn = chain_ab();
    const Dataset d = forward_sample(bn, 100000, 8);
    const Dataset noisy = corrupt(d, fixed_rate_channel(bn.variables(), {{"A", 0.1}}), 9);
    double flips = 0;
    for (std::size_t r = 0; r < d.num_rows(); ++r) flips += d.at(r, 0) != noisy.at(r, 0);
    CHECK(flips / 1e5 >= 0.09);
    CHECK(flips / 1e5 <= 0.11);
    CHECK(noisy.column("B").size() == d.column("B").size());
    for (std::size_t r = 0; r < d.num_rows(); ++r) REQUIRE(d.at(r, 1) == noisy.at(r, 1));
}

TEST_CASE("noisy marginal and per-state error rates") {
    const std::vector<Variable> vars{Variable::with_states("X", 3)};
    const BayesNet bn(MixedGraph(std::vector<NodeId>{"X"}), vars, {Cpt{"X", {}, {{0.5, 0.3, 0.2}}}});
    const NoiseChannel ch = draw_noise_channel(vars, 0.3, 21);
    const auto& m = ch.variables[0].matrix;
    const Dataset d = forward_sample(bn, 100000, 22);
    const Dataset noisy = corrupt(d, ch, 23);
    const double px[3] = {0.5, 0.3, 0.2};
    double count[3] = {}, same[3] = {}, total[3] = {};
    for (std::size_t r = 0; r < d.num_rows(); ++r) {
        count[noisy.at(r, 0)] += 1;
        total[d.at(r, 0)] += 1;
        same[d.at(r, 0)] += d.at(r, 0) == noisy.at(r, 0);
    }
    for (int k = 0; k < 3; ++k) {
        double expected = 0;
        for (int l = 0; l < 3; ++l) expected += px[l] * m[l][k];
        CHECK(std::abs(count[k] / 1e5 - expected) <= 0.01);
        CHECK(std::abs((1.0 - same[k] / total[k]) - ch.variables[0].state_alpha[k]) <= 0.01);
    }
}

TEST_CASE("random_bn") {
    RandomNetSpec one;
    one.n_nodes = 1;
    const BayesNet single = random_bn(one, 3);
    CHECK(single.graph().size() == 1);
    CHECK(single.cpts()[0].table.size() == 1);

    RandomNetSpec none;
    none.edge_prob = 0.0;
    CHECK(random_bn(none, 3).graph().num_edges() == 0);

    RandomNetSpec spec;
    CHECK(random_bn(spec, 5).graph() == random_bn(spec, 5).graph());

    double mean = 0, var = 0;
    for (std::size_t pos = 0; pos < spec.n_nodes; ++pos) {
        auto [m, v] = truncated_binomial_moments(pos, spec.edge_prob, spec.max_parents);
        mean += m;
        var += v;
    }
    double observed = 0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        const BayesNet bn = random_bn(spec, static_cast<std::uint64_t>(s));
        CHECK(bn.graph().is_dag());
        for (const auto& n : bn.graph().nodes()) {
            CHECK(bn.graph().parents(n).size() <= spec.max_parents);
            for (const auto& row : bn.cpt(n).table) {
                double sum = 0;
                for (double x : row) sum += x;
                CHECK(std::abs(sum - 1.0) <= 1e-9);
            }
        }
        observed += static_cast<double>(bn.graph().num_edges());
    }
    observed /= seeds;
    const double sigma = std::sqrt(var / seeds);
    CHECK(std::abs(observed - mean) <= 3 * sigma);
}
