#include "fvote/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "fvote/error.hpp"

namespace fvote {

namespace {

bool parse_index(std::string_view token, std::uint64_t& out) {
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size();
}

} // namespace

Graph read_edge_list(std::istream& in, Connectivity policy) {
    std::vector<Edge> edges;
    std::uint64_t n = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        if (line[first] == '#') {
            std::istringstream hdr(line.substr(first + 1));
            std::string key;
            std::uint64_t count = 0;
            if (hdr >> key && key == "n" && hdr >> count) {
                n = std::max(n, count);
            }
            continue;
        }
        std::istringstream fields(line);
        std::string a, b, extra;
        std::uint64_t u = 0, v = 0;
        if (!(fields >> a >> b) || (fields >> extra) || !parse_index(a, u) ||
            !parse_index(b, v)) {
            throw ParseError("edge list line " + std::to_string(lineno) +
                             ": expected two non-negative integers, got '" + line + "'");
        }
        if (u > 0xFFFFFFFEull || v > 0xFFFFFFFEull) {
            throw ParseError("edge list line " + std::to_string(lineno) + ": index too large");
        }
        if (u > v) {
            std::swap(u, v);
        }
        edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
        n = std::max(n, v + 1);
    }
    if (edges.empty()) {
        throw ParseError("edge list contains no edges");
    }
    return Graph(static_cast<std::size_t>(n), edges, policy);
}

Graph load_edge_list(const std::string& path, Connectivity policy) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open edge list '" + path + "'");
    }
    return read_edge_list(in, policy);
}

void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# n " << g.n() << '\n';
    for (const Edge& e : g.edges()) {
        out << e.u << ' ' << e.v << '\n';
    }
}

void save_edge_list(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write edge list '" + path + "'");
    }
    write_edge_list(out, g);
}

} // namespace fvote
