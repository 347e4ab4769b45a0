#include "sedbn/data.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sedbn/errors.hpp"
#include "sedbn/kernels.hpp"

namespace sedbn {

std::optional<StateIndex> Variable::state_index(const std::string& label) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == label) return static_cast<StateIndex>(i);
    }
    return std::nullopt;
}

void Variable::validate() const {
    if (!is_valid_node_id(name)) throw InvalidArgument("invalid variable name '" + name + "'");
    if (states.size() < 2) throw InvalidArgument("variable " + name + " needs at least two states");
    std::set<std::string> seen(states.begin(), states.end());
    if (seen.size() != states.size()) throw InvalidArgument("duplicate state label in " + name);
}

Variable Variable::with_states(NodeId name, std::size_t k) {
    Variable v{std::move(name), {}};
    for (std::size_t i = 0; i < k; ++i) v.states.push_back("s" + std::to_string(i));
    return v;
}

Dataset::Dataset(std::vector<Variable> schema) : schema_(std::move(schema)), columns_(schema_.size()) {
    for (std::size_t i = 0; i < schema_.size(); ++i) {
        if (!index_.emplace(schema_[i].name, i).second) throw SchemaMismatch("duplicate column " + schema_[i].name);
    }
}

Dataset::Dataset(std::vector<Variable> schema, std::vector<std::vector<StateIndex>> columns)
    : Dataset(std::move(schema)) {
    if (columns.size() != schema_.size()) throw SchemaMismatch("column count does not match schema");
    rows_ = columns.empty() ? 0 : columns.front().size();
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != rows_) throw SchemaMismatch("ragged columns");
        for (auto s : columns[c]) {
            if (s >= schema_[c].cardinality()) throw SchemaMismatch("state code out of range in " + schema_[c].name);
        }
    }
    columns_ = std::move(columns);
}

std::size_t Dataset::column_index(const NodeId& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw NodeNotFound(name);
    return it->second;
}

void Dataset::add_row(std::span<const StateIndex> row) {
    if (row.size() != schema_.size()) throw SchemaMismatch("row width does not match schema");
    for (std::size_t c = 0; c < row.size(); ++c) {
        if (row[c] >= schema_[c].cardinality()) throw SchemaMismatch("state code out of range in " + schema_[c].name);
    }
    for (std::size_t c = 0; c < row.size(); ++c) columns_[c].push_back(row[c]);
    ++rows_;
}

Dataset Dataset::select(const std::vector<NodeId>& names) const {
    std::vector<Variable> schema;
    std::vector<std::vector<StateIndex>> cols;
    for (const auto& n : names) {
        const std::size_t c = column_index(n);
        schema.push_back(schema_[c]);
        cols.push_back(columns_[c]);
    }
    Dataset out(std::move(schema), std::move(cols));
    out.rows_ = rows_;
    return out;
}

bool operator==(const Dataset& l, const Dataset& r) {
    return l.schema_ == r.schema_ && l.rows_ == r.rows_ && l.columns_ == r.columns_;
}

std::uint64_t SufficientStats::row_total(std::size_t j) const {
    std::uint64_t t = 0;
    for (std::size_t k = 0; k < child_cardinality; ++k) t += at(j, k);
    return t;
}

std::uint64_t SufficientStats::total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
}

SufficientStats counts(const Dataset& data, const NodeId& child, const std::vector<NodeId>& parents) {
    kernels::FamilyColumns family;
    family.child = data.column(child);
    family.child_cardinality = data.variable(child).cardinality();
    for (const auto& p : parents) {
        family.parents.push_back(data.column(p));
        family.parent_cardinalities.push_back(data.variable(p).cardinality());
    }
    SufficientStats stats;
    stats.child = child;
    stats.parents = parents;
    stats.child_cardinality = family.child_cardinality;
    stats.configurations = family.configurations();
    stats.counts.assign(stats.configurations * stats.child_cardinality, 0);
    kernels::parallel::family_counts(family, stats.counts);
    return stats;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    if (line.find('"') != std::string::npos) throw ParseError("quoted fields are not supported", line_no);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

Dataset parse_csv(std::istream& in, const std::optional<std::vector<Variable>>& schema) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("missing header row", 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line, line_no);

    std::vector<Variable> vars;
    for (const auto& name : header) {
        if (!is_valid_node_id(name)) throw ParseError("invalid column name '" + name + "'", line_no);
        if (schema) {
            auto it = std::find_if(schema->begin(), schema->end(), [&](const Variable& v) { return v.name == name; });
            if (it == schema->end()) throw SchemaMismatch("column " + name + " is not in the network");
            vars.push_back(*it);
        } else {
            vars.push_back(Variable{name, {}});
        }
    }

    const std::size_t width = header.size();
    std::vector<std::vector<StateIndex>> cols(width);
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_csv_line(line, line_no);
        if (cells.size() != width) {
            throw ParseError("expected " + std::to_string(width) + " fields, got " + std::to_string(cells.size()),
                             line_no);
        }
        for (std::size_t c = 0; c < width; ++c) {
            auto idx = vars[c].state_index(cells[c]);
            if (!idx) {
                if (schema) throw UnknownState(vars[c].name, cells[c]);
                if (cells[c].empty()) throw ParseError("empty cell in column " + vars[c].name, line_no);
                vars[c].states.push_back(cells[c]);
                idx = static_cast<StateIndex>(vars[c].states.size() - 1);
            }
            cols[c].push_back(*idx);
        }
    }
    // Inferred columns seen with a single state still need r >= 2.
    if (!schema) {
        for (auto& v : vars) {
            while (v.states.size() < 2) v.states.push_back(v.states.empty() ? "s0" : "<unseen>");
        }
    }
    return Dataset(std::move(vars), std::move(cols));
}

Dataset read_csv(const std::string& path, const std::optional<std::vector<Variable>>& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path, 0);
    return parse_csv(in, schema);
}

void write_csv(std::ostream& out, const Dataset& data) {
    const auto& schema = data.schema();
    for (std::size_t c = 0; c < schema.size(); ++c) out << (c ? "," : "") << schema[c].name;
    out << '\n';
    for (std::size_t r = 0; r < data.num_rows(); ++r) {
        for (std::size_t c = 0; c < schema.size(); ++c) out << (c ? "," : "") << schema[c].states[data.at(r, c)];
        out << '\n';
    }
}

void write_csv(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    write_csv(out, data);
}

}  // namespace sedbn
