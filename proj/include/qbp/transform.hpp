#pragma once

#include <map>

#include "qbp/graph.hpp"

namespace qbp {

// Replaces every unlabeled node by a node reading one fresh dummy variable
// (index num_vars+1 of the output graph); each amplitude-only edge becomes a
// 0/1-labeled pair with the same amplitude. Identity when no unlabeled nodes
// exist.
QbpGraph expand_unlabeled(const QbpGraph& g);

// Sets variables to constants: nodes of assigned variables lose their label,
// outgoing edges inconsistent with the assignment are removed and the
// remaining ones lose their boolean labels. Node count is unchanged.
QbpGraph restrict_vars(const QbpGraph& g, const std::map<int, int>& assignment);

}  // namespace qbp
