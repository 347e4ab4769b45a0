#include "sedbn/em.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>

#include "sedbn/errors.hpp"
#include "sedbn/kernels.hpp"
#include "sedbn/rng.hpp"
#include "sedbn/score.hpp"

namespace sedbn {

void EmConfig::validate() const {
    if (!(epsilon > 0.0)) throw InvalidArgument("EM epsilon must be positive");
    if (max_iter < 1) throw InvalidArgument("EM max_iter must be at least 1");
    if (restarts < 1) throw InvalidArgument("EM restarts must be at least 1");
}

const Cpt& EmResult::cpt(const NodeId& child) const {
    for (const auto& c : theta) {
        if (c.child == child) return c;
    }
    throw NodeNotFound(child);
}

namespace {

// Below this many distinct patterns the OpenMP fork costs more than it saves.
constexpr std::size_t kParallelPatternThreshold = 4096;

struct VectorHash {
    std::size_t operator()(const std::vector<StateIndex>& v) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto s : v) h = mix64(h ^ s);
        return static_cast<std::size_t>(h);
    }
};

// The latent family block of a DAG: the hidden node, its children, and the
// Markov blanket projected onto distinct data patterns.
class LatentProblem {
public:
    LatentProblem(const MixedGraph& g, const Variable& hidden, const Dataset& data, FamilyScoreCache* cache)
        : g_(g), hidden_(hidden), data_(data) {
        if (!g.is_dag()) throw NotADag("EM needs a DAG");
        hidden.validate();
        if (!g.has_node(hidden.name)) throw NodeNotFound(hidden.name);
        if (data.has_column(hidden.name)) throw InvalidReconstruction("hidden node " + hidden.name + " is observed");
        for (const auto& n : g.nodes()) {
            if (n != hidden.name && !data.has_column(n)) throw NodeNotFound(n);
        }
        if (data.num_rows() == 0) throw InvalidArgument("EM needs at least one record");
        hidden_parents_ = g.parents(hidden.name);
        children_ = g.children(hidden.name);
        if (children_.empty()) throw InvalidReconstruction("hidden node " + hidden.name + " has no observed child");
        for (const auto& c : children_) child_parents_.push_back(g.parents(c));

        build_layout();

        for (const auto& n : g.nodes()) {
            if (touches_hidden(n)) continue;
            const auto pa = g.parents(n);
            constant_ll_ += cache ? cache->loglik(n, pa) : family_loglik(counts(data, n, pa));
        }
    }

    const kernels::LatentLayout& layout() const noexcept { return layout_; }
    double constant_ll() const noexcept { return constant_ll_; }

    bool touches_hidden(const NodeId& n) const {
        return n == hidden_.name || std::find(children_.begin(), children_.end(), n) != children_.end();
    }

    std::size_t cardinality(const NodeId& n) const {
        return n == hidden_.name ? hidden_.cardinality() : data_.variable(n).cardinality();
    }

    kernels::LatentTables random_tables(Rng& rng) const {
        auto t = kernels::LatentTables::zeros_like(layout_);
        fill_dirichlet(t.hidden, layout_.hidden_cardinality, rng);
        for (std::size_t c = 0; c < children_.size(); ++c) fill_dirichlet(t.children[c], layout_.children[c].cardinality, rng);
        return t;
    }

    kernels::LatentTables tables_from(const std::vector<Cpt>& theta) const {
        auto t = kernels::LatentTables::zeros_like(layout_);
        copy_rows(find_cpt(theta, hidden_.name), hidden_parents_, t.hidden, layout_.hidden_cardinality);
        for (std::size_t c = 0; c < children_.size(); ++c) {
            copy_rows(find_cpt(theta, children_[c]), child_parents_[c], t.children[c], layout_.children[c].cardinality);
        }
        return t;
    }

    double loglik(const kernels::LatentTables& theta, kernels::LatentTables& expected) const {
        const double ll = layout_.num_patterns() >= kParallelPatternThreshold
                              ? kernels::parallel::expected_counts(layout_, theta, expected)
                              : kernels::serial::expected_counts(layout_, theta, expected);
        return constant_ll_ + ll;
    }

    // theta = normalized expected counts; empty rows become uniform.
    static void maximize(const kernels::LatentTables& expected, kernels::LatentTables& theta,
                         const kernels::LatentLayout& layout) {
        normalize_rows(expected.hidden, theta.hidden, layout.hidden_cardinality);
        for (std::size_t c = 0; c < layout.children.size(); ++c) {
            normalize_rows(expected.children[c], theta.children[c], layout.children[c].cardinality);
        }
    }

    std::vector<Cpt> to_cpts(const kernels::LatentTables& theta) const {
        std::vector<Cpt> out;
        for (const auto& n : g_.nodes()) {
            Cpt cpt{n, g_.parents(n), {}};
            const kernels::LatentTables* src = nullptr;
            std::span<const double> flat;
            if (n == hidden_.name) {
                src = &theta;
                flat = theta.hidden;
            } else if (auto it = std::find(children_.begin(), children_.end(), n); it != children_.end()) {
                src = &theta;
                flat = theta.children[static_cast<std::size_t>(it - children_.begin())];
            }
            const std::size_t r = cardinality(n);
            if (src) {
                // Stored with the graph's parent order, which is what Cpt uses too.
                for (std::size_t off = 0; off < flat.size(); off += r) cpt.table.emplace_back(flat.begin() + off, flat.begin() + off + r);
            } else {
                const auto stats = counts(data_, n, cpt.parents);
                for (std::size_t j = 0; j < stats.configurations; ++j) {
                    const double total = static_cast<double>(stats.row_total(j));
                    std::vector<double> row(r, 1.0 / static_cast<double>(r));
                    if (total > 0.0) {
                        for (std::size_t k = 0; k < r; ++k) row[k] = static_cast<double>(stats.at(j, k)) / total;
                    }
                    cpt.table.push_back(std::move(row));
                }
            }
            out.push_back(std::move(cpt));
        }
        return out;
    }

private:
    static const Cpt& find_cpt(const std::vector<Cpt>& theta, const NodeId& n) {
        for (const auto& c : theta) {
            if (c.child == n) return c;
        }
        throw NodeNotFound(n);
    }

    // Reorders a CPT whose parent list may be permuted relative to the graph.
    void copy_rows(const Cpt& cpt, const std::vector<NodeId>& graph_parents, std::vector<double>& dst, std::size_t r) const {
        std::vector<std::size_t> cards;
        for (const auto& p : graph_parents) cards.push_back(cardinality(p));
        std::vector<std::size_t> cpt_pos;
        for (const auto& p : graph_parents) {
            auto it = std::find(cpt.parents.begin(), cpt.parents.end(), p);
            if (it == cpt.parents.end()) throw InvalidArgument("CPT of " + cpt.child + " lacks parent " + p);
            cpt_pos.push_back(static_cast<std::size_t>(it - cpt.parents.begin()));
        }
        std::vector<std::size_t> cpt_cards(cpt.parents.size());
        for (std::size_t i = 0; i < graph_parents.size(); ++i) cpt_cards[cpt_pos[i]] = cards[i];
        const std::size_t q = dst.size() / r;
        std::vector<std::size_t> digits(graph_parents.size());
        for (std::size_t j = 0; j < q; ++j) {
            std::size_t rest = j;
            for (std::size_t i = graph_parents.size(); i-- > 0;) {
                digits[i] = rest % cards[i];
                rest /= cards[i];
            }
            std::vector<std::size_t> cpt_digits(cpt.parents.size());
            for (std::size_t i = 0; i < graph_parents.size(); ++i) cpt_digits[cpt_pos[i]] = digits[i];
            std::size_t cj = 0;
            for (std::size_t i = 0; i < cpt_digits.size(); ++i) cj = cj * cpt_cards[i] + cpt_digits[i];
            if (cpt.table.at(cj).size() != r) throw InvalidArgument("CPT row width mismatch for " + cpt.child);
            std::copy(cpt.table[cj].begin(), cpt.table[cj].end(), dst.begin() + static_cast<std::ptrdiff_t>(j * r));
        }
    }

    static void fill_dirichlet(std::vector<double>& flat, std::size_t r, Rng& rng) {
        for (std::size_t off = 0; off < flat.size(); off += r) {
            const auto row = sample_flat_dirichlet(r, rng);
            std::copy(row.begin(), row.end(), flat.begin() + static_cast<std::ptrdiff_t>(off));
        }
    }

    static void normalize_rows(const std::vector<double>& expected, std::vector<double>& theta, std::size_t r) {
        for (std::size_t off = 0; off < expected.size(); off += r) {
            double total = 0.0;
            for (std::size_t k = 0; k < r; ++k) total += expected[off + k];
            for (std::size_t k = 0; k < r; ++k) {
                theta[off + k] = total > 0.0 ? expected[off + k] / total : 1.0 / static_cast<double>(r);
            }
        }
    }

    void build_layout() {
        const std::size_t R = hidden_.cardinality();
        // Observed blanket columns: pa(H), children, and the children's other parents.
        std::vector<NodeId> blanket;
        auto add = [&](const NodeId& n) {
            if (n != hidden_.name && std::find(blanket.begin(), blanket.end(), n) == blanket.end()) blanket.push_back(n);
        };
        for (const auto& p : hidden_parents_) add(p);
        for (std::size_t c = 0; c < children_.size(); ++c) {
            add(children_[c]);
            for (const auto& p : child_parents_[c]) add(p);
        }
        auto slot = [&](const NodeId& n) {
            return static_cast<std::size_t>(std::find(blanket.begin(), blanket.end(), n) - blanket.begin());
        };

        std::vector<std::span<const StateIndex>> cols;
        for (const auto& n : blanket) cols.push_back(data_.column(n));

        std::unordered_map<std::vector<StateIndex>, std::size_t, VectorHash> index;
        std::vector<std::vector<StateIndex>> patterns;
        std::vector<double> weights;
        std::vector<StateIndex> key(blanket.size());
        for (std::size_t row = 0; row < data_.num_rows(); ++row) {
            for (std::size_t i = 0; i < blanket.size(); ++i) key[i] = cols[i][row];
            auto [it, inserted] = index.try_emplace(key, patterns.size());
            if (inserted) {
                patterns.push_back(key);
                weights.push_back(0.0);
            }
            weights[it->second] += 1.0;
        }

        layout_.hidden_cardinality = R;
        layout_.hidden_configurations = 1;
        for (const auto& p : hidden_parents_) layout_.hidden_configurations *= cardinality(p);
        layout_.weights = std::move(weights);
        const std::size_t P = patterns.size();
        layout_.hidden_row.resize(P);
        for (std::size_t p = 0; p < P; ++p) {
            std::size_t j = 0;
            for (const auto& par : hidden_parents_) j = j * cardinality(par) + patterns[p][slot(par)];
            layout_.hidden_row[p] = static_cast<std::uint32_t>(j);
        }
        for (std::size_t c = 0; c < children_.size(); ++c) {
            kernels::LatentLayout::Child child;
            child.cardinality = cardinality(children_[c]);
            child.configurations = 1;
            for (const auto& par : child_parents_[c]) child.configurations *= cardinality(par);
            child.row.resize(P * R);
            child.state.resize(P);
            for (std::size_t p = 0; p < P; ++p) {
                child.state[p] = patterns[p][slot(children_[c])];
                for (std::size_t h = 0; h < R; ++h) {
                    std::size_t j = 0;
                    for (const auto& par : child_parents_[c]) {
                        const std::size_t v = par == hidden_.name ? h : patterns[p][slot(par)];
                        j = j * cardinality(par) + v;
                    }
                    child.row[p * R + h] = static_cast<std::uint32_t>(j);
                }
            }
            layout_.children.push_back(std::move(child));
        }
    }

    const MixedGraph& g_;
    const Variable& hidden_;
    const Dataset& data_;
    std::vector<NodeId> hidden_parents_;
    std::vector<NodeId> children_;
    std::vector<std::vector<NodeId>> child_parents_;
    kernels::LatentLayout layout_;
    double constant_ll_ = 0.0;
};

struct RunOutcome {
    kernels::LatentTables theta;
    std::vector<double> trace;
    bool converged = false;
};

RunOutcome run_em(const LatentProblem& problem, kernels::LatentTables theta, const EmConfig& cfg) {
    RunOutcome out;
    auto expected = kernels::LatentTables::zeros_like(problem.layout());
    out.trace.push_back(problem.loglik(theta, expected));
    for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        LatentProblem::maximize(expected, theta, problem.layout());
        const double ll = problem.loglik(theta, expected);
        const double prev = out.trace.back();
        out.trace.push_back(ll);
        if (ll - prev < cfg.epsilon) {
            out.converged = true;
            break;
        }
    }
    out.theta = std::move(theta);
    return out;
}

}  // namespace

EmResult em_fit(const MixedGraph& g, const Variable& hidden, const Dataset& data, const EmConfig& cfg) {
    return em_fit(g, hidden, data, cfg, nullptr);
}

EmResult em_fit(const MixedGraph& g, const Variable& hidden, const Dataset& data, const EmConfig& cfg,
                FamilyScoreCache* cache) {
    cfg.validate();
    LatentProblem problem(g, hidden, data, cache);
    std::optional<RunOutcome> best;
    EmResult result;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        Rng rng(SeedSequence(cfg.seed).add("em-restart").add(r).value());
        auto run = run_em(problem, problem.random_tables(rng), cfg);
        result.restart_loglik.push_back(run.trace.back());
        if (!best || run.trace.back() > best->trace.back()) {
            best = std::move(run);
            result.best_restart = r;
        }
    }
    result.theta = problem.to_cpts(best->theta);
    result.ll_trace = std::move(best->trace);
    result.converged = best->converged;
    return result;
}

EmResult em_fit_from(const MixedGraph& g, const Variable& hidden, const Dataset& data, const std::vector<Cpt>& initial,
                     const EmConfig& cfg) {
    cfg.validate();
    LatentProblem problem(g, hidden, data, nullptr);
    auto run = run_em(problem, problem.tables_from(initial), cfg);
    EmResult result;
    result.restart_loglik.push_back(run.trace.back());
    result.theta = problem.to_cpts(run.theta);
    result.ll_trace = std::move(run.trace);
    result.converged = run.converged;
    return result;
}

double marginal_loglik(const MixedGraph& g, const Variable& hidden, const Dataset& data, const std::vector<Cpt>& theta) {
    LatentProblem problem(g, hidden, data, nullptr);
    auto expected = kernels::LatentTables::zeros_like(problem.layout());
    // The latent block is evaluated at theta; the remaining families are scored
    // at theta as well so the result is the likelihood of theta, not of the MLE.
    const double latent = problem.loglik(problem.tables_from(theta), expected) - problem.constant_ll();
    double rest = 0.0;
    for (const auto& n : g.nodes()) {
        if (problem.touches_hidden(n)) continue;
        const Cpt* cpt = nullptr;
        for (const auto& c : theta) {
            if (c.child == n) cpt = &c;
        }
        if (!cpt) throw NodeNotFound(n);
        const auto stats = counts(data, n, cpt->parents);
        for (std::size_t j = 0; j < stats.configurations; ++j) {
            for (std::size_t k = 0; k < stats.child_cardinality; ++k) {
                if (stats.at(j, k) > 0) rest += static_cast<double>(stats.at(j, k)) * std::log(cpt->prob(j, k));
            }
        }
    }
    return latent + rest;
}

std::vector<double> posterior_hidden(const std::vector<Cpt>& theta, const MixedGraph& g, const Variable& hidden,
                                     const Record& record) {
    auto find = [&](const NodeId& n) -> const Cpt& {
        for (const auto& c : theta) {
            if (c.child == n) return c;
        }
        throw NodeNotFound(n);
    };
    auto cardinality = [&](const NodeId& n) { return n == hidden.name ? hidden.cardinality() : find(n).table.at(0).size(); };
    auto value = [&](const NodeId& n, std::size_t h) -> std::size_t {
        if (n == hidden.name) return h;
        auto it = record.find(n);
        if (it == record.end()) throw NodeNotFound(n);
        return it->second;
    };
    auto prob = [&](const NodeId& n, std::size_t h) {
        const Cpt& cpt = find(n);
        std::size_t j = 0;
        for (const auto& p : cpt.parents) j = j * cardinality(p) + value(p, h);
        return cpt.prob(j, value(n, h));
    };

    const std::size_t R = hidden.cardinality();
    std::vector<double> post(R);
    double total = 0.0;
    const auto children = g.children(hidden.name);
    for (std::size_t h = 0; h < R; ++h) {
        double w = prob(hidden.name, h);
        for (const auto& c : children) w *= prob(c, h);
        post[h] = w;
        total += w;
    }
    for (auto& p : post) p = total > 0.0 ? p / total : 1.0 / static_cast<double>(R);
    return post;
}

}  // namespace sedbn
