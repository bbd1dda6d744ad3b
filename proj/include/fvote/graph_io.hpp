#pragma once

#include <iosfwd>
#include <string>

#include "fvote/graph.hpp"

// Edge-list text format: one "u v" pair per line, 0-indexed; "u u" is a
// self-loop; lines starting with '#' are comments. The vertex count is one
// more than the largest index seen, unless a "# n <count>" header says more.

namespace fvote {

Graph read_edge_list(std::istream& in, Connectivity policy = Connectivity::Require);
Graph load_edge_list(const std::string& path, Connectivity policy = Connectivity::Require);

void write_edge_list(std::ostream& out, const Graph& g);
void save_edge_list(const std::string& path, const Graph& g);

} // namespace fvote
