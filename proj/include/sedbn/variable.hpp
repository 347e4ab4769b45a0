#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sedbn/graph.hpp"

namespace sedbn {

using StateIndex = std::uint16_t;

// A categorical variable with at least two uniquely labelled states.
struct Variable {
    NodeId name;
    std::vector<std::string> states;

    std::size_t cardinality() const noexcept { return states.size(); }
    std::optional<StateIndex> state_index(const std::string& label) const;
    // Throws InvalidArgument unless the invariants hold.
    void validate() const;

    // Variable with states s0..s{k-1}.
    static Variable with_states(NodeId name, std::size_t k);

    friend bool operator==(const Variable&, const Variable&) = default;
};

}  // namespace sedbn
