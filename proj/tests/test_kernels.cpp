#include <doctest.h>

#include <cmath>

#include "sedbn/kernels.hpp"
#include "sedbn/model.hpp"
#include "support.hpp"

using namespace sedbn;
using namespace sedbn::kernels;

namespace {

struct RandomLatent {
    LatentLayout layout;
    LatentTables theta;
};

std::vector<double> random_rows(std::size_t rows, std::size_t r, Rng& rng) {
    std::vector<double> out;
    for (std::size_t j = 0; j < rows; ++j) {
        auto row = sample_flat_dirichlet(r, rng);
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

RandomLatent random_latent(std::size_t patterns, Rng& rng) {
    RandomLatent out;
    auto& l = out.layout;
    l.hidden_cardinality = 3;
    l.hidden_configurations = 2;
    l.children.resize(2);
    l.children[0] = {2, 3 * 2, {}, {}};
    l.children[1] = {4, 3, {}, {}};
    for (std::size_t p = 0; p < patterns; ++p) {
        l.weights.push_back(1.0 + static_cast<double>(rng() % 5));
        l.hidden_row.push_back(static_cast<std::uint32_t>(rng() % 2));
        const std::uint32_t other = static_cast<std::uint32_t>(rng() % 2);
        for (std::size_t h = 0; h < 3; ++h) {
            l.children[0].row.push_back(static_cast<std::uint32_t>(h * 2 + other));
            l.children[1].row.push_back(static_cast<std::uint32_t>(h));
        }
        l.children[0].state.push_back(static_cast<StateIndex>(rng() % 2));
        l.children[1].state.push_back(static_cast<StateIndex>(rng() % 4));
    }
    out.theta.hidden = random_rows(2, 3, rng);
    out.theta.children.push_back(random_rows(6, 2, rng));
    out.theta.children.push_back(random_rows(3, 4, rng));
    return out;
}

}  // namespace

TEST_CASE("expected counts: serial, parallel and direct accumulation agree") {
    Rng rng(42);
    for (std::size_t patterns : {1u, 17u, 5000u}) {
        const auto [layout, theta] = random_latent(patterns, rng);
        auto serial_out = LatentTables::zeros_like(layout);
        auto parallel_out = LatentTables::zeros_like(layout);
        const double ll_s = serial::expected_counts(layout, theta, serial_out);
        const double ll_p = parallel::expected_counts(layout, theta, parallel_out);
        CHECK(ll_s == doctest::Approx(ll_p).epsilon(1e-12));

        auto direct = LatentTables::zeros_like(layout);
        double ll_direct = 0;
        for (std::size_t p = 0; p < patterns; ++p) {
            double joint[3], total = 0;
            for (std::size_t h = 0; h < 3; ++h) {
                joint[h] = theta.hidden[layout.hidden_row[p] * 3 + h] *
                           theta.children[0][layout.children[0].row[p * 3 + h] * 2 + layout.children[0].state[p]] *
                           theta.children[1][layout.children[1].row[p * 3 + h] * 4 + layout.children[1].state[p]];
                total += joint[h];
            }
            ll_direct += layout.weights[p] * std::log(total);
            for (std::size_t h = 0; h < 3; ++h) {
                const double m = layout.weights[p] * joint[h] / total;
                direct.hidden[layout.hidden_row[p] * 3 + h] += m;
                direct.children[0][layout.children[0].row[p * 3 + h] * 2 + layout.children[0].state[p]] += m;
                direct.children[1][layout.children[1].row[p * 3 + h] * 4 + layout.children[1].state[p]] += m;
            }
        }
        CHECK(std::abs(ll_s - ll_direct) <= 1e-9 * std::max(1.0, std::abs(ll_direct)));
        for (std::size_t i = 0; i < direct.hidden.size(); ++i) {
            CHECK(std::abs(serial_out.hidden[i] - direct.hidden[i]) <= 1e-9);
            CHECK(std::abs(parallel_out.hidden[i] - direct.hidden[i]) <= 1e-9);
        }
        for (std::size_t c = 0; c < 2; ++c) {
            for (std::size_t i = 0; i < direct.children[c].size(); ++i) {
                CHECK(std::abs(serial_out.children[c][i] - direct.children[c][i]) <= 1e-9);
                CHECK(std::abs(parallel_out.children[c][i] - direct.children[c][i]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("posterior falls back to uniform when every joint weight is zero") {
    Rng rng(1);
    auto [layout, theta] = random_latent(1, rng);
    std::fill(theta.hidden.begin(), theta.hidden.end(), 0.0);
    std::vector<double> post(3);
    posterior(layout, theta, 0, post);
    for (double p : post) CHECK(p == doctest::Approx(1.0 / 3.0));
    auto out = LatentTables::zeros_like(layout);
    CHECK(std::isinf(serial::expected_counts(layout, theta, out)));
}

TEST_CASE("family counts: serial and parallel agree") {
    const BayesNet bn = random_bn(RandomNetSpec{6, 3, 3, 0.5}, 8);
    const Dataset d = forward_sample(bn, 20000, 1);
    FamilyColumns f;
    f.child = d.column(0);
    f.child_cardinality = 3;
    for (std::size_t c = 1; c < 4; ++c) {
        f.parents.push_back(d.column(c));
        f.parent_cardinalities.push_back(3);
    }
    std::vector<std::uint64_t> a(f.configurations() * 3), b(a.size());
    serial::family_counts(f, a);
    parallel::family_counts(f, b);
    CHECK(a == b);
    std::uint64_t total = 0;
    for (auto x : a) total += x;
    CHECK(total == 20000);
}
