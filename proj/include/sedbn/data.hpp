#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sedbn/variable.hpp"

namespace sedbn {

/// Complete categorical records. Cells are state codes stored column-major,
/// so family counting streams a handful of contiguous columns.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<Variable> schema);
    Dataset(std::vector<Variable> schema, std::vector<std::vector<StateIndex>> columns);

    const std::vector<Variable>& schema() const noexcept { return schema_; }
    std::size_t num_columns() const noexcept { return schema_.size(); }
    std::size_t num_rows() const noexcept { return rows_; }

    bool has_column(const NodeId& name) const { return index_.count(name) != 0; }
    std::size_t column_index(const NodeId& name) const;
    const Variable& variable(const NodeId& name) const { return schema_[column_index(name)]; }
    std::span<const StateIndex> column(std::size_t c) const { return columns_[c]; }
    std::span<const StateIndex> column(const NodeId& name) const { return columns_[column_index(name)]; }
    StateIndex at(std::size_t row, std::size_t col) const { return columns_[col][row]; }

    void add_row(std::span<const StateIndex> row);

    // New dataset holding the given columns, in the given order.
    Dataset select(const std::vector<NodeId>& names) const;

    friend bool operator==(const Dataset&, const Dataset&);

private:
    std::vector<Variable> schema_;
    std::map<NodeId, std::size_t> index_;
    std::vector<std::vector<StateIndex>> columns_;
    std::size_t rows_ = 0;
};

/// Contingency counts of one family. Parent configurations use mixed radix
/// with the LAST parent varying fastest, matching CPT row order.
struct SufficientStats {
    NodeId child;
    std::vector<NodeId> parents;
    std::size_t child_cardinality = 0;
    std::size_t configurations = 1;  // q
    std::vector<std::uint64_t> counts;  // configurations x child_cardinality, row-major

    std::uint64_t at(std::size_t j, std::size_t k) const { return counts[j * child_cardinality + k]; }
    std::uint64_t row_total(std::size_t j) const;
    std::uint64_t total() const;
};

SufficientStats counts(const Dataset& data, const NodeId& child, const std::vector<NodeId>& parents);

// CSV with a header of variable names and state labels in cells. Without a
// schema, states are ordered by first occurrence; with one, the schema's
// order wins and unseen labels raise UnknownState.
Dataset parse_csv(std::istream& in, const std::optional<std::vector<Variable>>& schema = std::nullopt);
Dataset read_csv(const std::string& path, const std::optional<std::vector<Variable>>& schema = std::nullopt);
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::string& path, const Dataset& data);

}  // namespace sedbn
