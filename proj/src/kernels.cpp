#include "sedbn/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sedbn::kernels {

std::size_t FamilyColumns::configurations() const {
    std::size_t q = 1;
    for (auto c : parent_cardinalities) q *= c;
    return q;
}

LatentTables LatentTables::zeros_like(const LatentLayout& layout) {
    LatentTables t;
    t.hidden.assign(layout.hidden_configurations * layout.hidden_cardinality, 0.0);
    for (const auto& c : layout.children) t.children.emplace_back(c.configurations * c.cardinality, 0.0);
    return t;
}

void LatentTables::fill(double value) {
    std::fill(hidden.begin(), hidden.end(), value);
    for (auto& c : children) std::fill(c.begin(), c.end(), value);
}

double joint_weight(const LatentLayout& layout, const LatentTables& theta, std::size_t p, std::size_t h) {
    const std::size_t R = layout.hidden_cardinality;
    double w = theta.hidden[layout.hidden_row[p] * R + h];
    for (std::size_t c = 0; c < layout.children.size() && w > 0.0; ++c) {
        const auto& child = layout.children[c];
        w *= theta.children[c][child.row[p * R + h] * child.cardinality + child.state[p]];
    }
    return w;
}

void posterior(const LatentLayout& layout, const LatentTables& theta, std::size_t p, std::span<double> out) {
    const std::size_t R = layout.hidden_cardinality;
    double total = 0.0;
    for (std::size_t h = 0; h < R; ++h) {
        out[h] = joint_weight(layout, theta, p, h);
        total += out[h];
    }
    for (std::size_t h = 0; h < R; ++h) out[h] = total > 0.0 ? out[h] / total : 1.0 / static_cast<double>(R);
}

namespace {

inline std::size_t family_cell(const FamilyColumns& f, std::size_t n) {
    std::size_t j = 0;
    for (std::size_t p = 0; p < f.parents.size(); ++p) j = j * f.parent_cardinalities[p] + f.parents[p][n];
    return j * f.child_cardinality + f.child[n];
}

// Accumulates pattern p into `out` and returns its log-likelihood contribution.
inline double accumulate_pattern(const LatentLayout& layout, const LatentTables& theta, std::size_t p,
                                 std::span<double> post, LatentTables& out) {
    const std::size_t R = layout.hidden_cardinality;
    double total = 0.0;
    for (std::size_t h = 0; h < R; ++h) {
        post[h] = joint_weight(layout, theta, p, h);
        total += post[h];
    }
    const double w = layout.weights[p];
    double ll;
    if (total > 0.0) {
        for (std::size_t h = 0; h < R; ++h) post[h] /= total;
        ll = w * std::log(total);
    } else {
        std::fill(post.begin(), post.end(), 1.0 / static_cast<double>(R));
        ll = -std::numeric_limits<double>::infinity();
    }
    const std::size_t hrow = layout.hidden_row[p] * R;
    for (std::size_t h = 0; h < R; ++h) {
        const double mass = w * post[h];
        out.hidden[hrow + h] += mass;
        for (std::size_t c = 0; c < layout.children.size(); ++c) {
            const auto& child = layout.children[c];
            out.children[c][child.row[p * R + h] * child.cardinality + child.state[p]] += mass;
        }
    }
    return ll;
}

void add_into(LatentTables& dst, const LatentTables& src) {
    for (std::size_t i = 0; i < dst.hidden.size(); ++i) dst.hidden[i] += src.hidden[i];
    for (std::size_t c = 0; c < dst.children.size(); ++c) {
        for (std::size_t i = 0; i < dst.children[c].size(); ++i) dst.children[c][i] += src.children[c][i];
    }
}

}  // namespace

namespace serial {

void family_counts(const FamilyColumns& family, std::span<std::uint64_t> out) {
    std::fill(out.begin(), out.end(), 0);
    const std::size_t n = family.child.size();
    for (std::size_t row = 0; row < n; ++row) ++out[family_cell(family, row)];
}

double expected_counts(const LatentLayout& layout, const LatentTables& theta, LatentTables& out) {
    out.fill(0.0);
    std::vector<double> post(layout.hidden_cardinality);
    double ll = 0.0;
    for (std::size_t p = 0; p < layout.num_patterns(); ++p) ll += accumulate_pattern(layout, theta, p, post, out);
    return ll;
}

}  // namespace serial

namespace parallel {

void family_counts(const FamilyColumns& family, std::span<std::uint64_t> out) {
    std::fill(out.begin(), out.end(), 0);
    const auto n = static_cast<std::ptrdiff_t>(family.child.size());
#pragma omp parallel
    {
        std::vector<std::uint64_t> local(out.size(), 0);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t row = 0; row < n; ++row) ++local[family_cell(family, static_cast<std::size_t>(row))];
#pragma omp critical(sedbn_family_counts_merge)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += local[i];
    }
}

double expected_counts(const LatentLayout& layout, const LatentTables& theta, LatentTables& out) {
    out.fill(0.0);
    const auto patterns = static_cast<std::ptrdiff_t>(layout.num_patterns());
    double ll = 0.0;
#pragma omp parallel reduction(+ : ll)
    {
        LatentTables local = LatentTables::zeros_like(layout);
        std::vector<double> post(layout.hidden_cardinality);
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t p = 0; p < patterns; ++p) {
            ll += accumulate_pattern(layout, theta, static_cast<std::size_t>(p), post, local);
        }
#pragma omp critical(sedbn_expected_counts_merge)
        add_into(out, local);
    }
    return ll;
}

}  // namespace parallel

}  // namespace sedbn::kernels
