#pragma once

#include <string>

#include "qbp/graph.hpp"

namespace qbp {

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// QBP file format, UTF-8 JSON with version field 1. Doubles are written with
// their shortest round-trip decimal representation.
std::string save(const QbpGraph& g);
QbpGraph load(const std::string& bytes);

std::string to_dot(const QbpGraph& g);

void save_file(const QbpGraph& g, const std::string& path);
QbpGraph load_file(const std::string& path);

}  // namespace qbp
