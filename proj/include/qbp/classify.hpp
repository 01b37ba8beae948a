#pragma once

#include <optional>

#include "qbp/graph.hpp"

namespace qbp {

struct ClassInfo {
    bool leveled = false;
    bool read_once = false;
    bool regular_read_once = false;  // every path reads every variable exactly once
    std::optional<std::vector<int>> obdd_order;
    bool reversible_classical = false;
    std::optional<int> width;  // leveled graphs only
    bool acyclic = true;
};

ClassInfo classify(const CompiledGraph& cg);

}  // namespace qbp
