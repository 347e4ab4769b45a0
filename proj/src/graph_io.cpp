#include <fstream>
#include <sstream>

#include "sedbn/errors.hpp"
#include "sedbn/graph.hpp"

namespace sedbn {

MixedGraph parse_graph(std::istream& in) {
    MixedGraph g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream tokens(line);
        std::vector<std::string> words;
        for (std::string w; tokens >> w;) words.push_back(w);
        if (words.empty() || words.front().front() == '#') continue;
        try {
            if (words.size() == 2 && words[0] == "node") {
                g.add_node(words[1]);
            } else if (words.size() == 3 && (words[1] == "->" || words[1] == "--")) {
                g.add_node(words[0]);
                g.add_node(words[2]);
                if (words[1] == "->") {
                    g.add_directed(words[0], words[2]);
                } else {
                    g.add_undirected(words[0], words[2]);
                }
            } else {
                throw ParseError("expected `A -> B`, `A -- B` or `node A`", line_no);
            }
        } catch (const InvalidGraph& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    return g;
}

MixedGraph parse_graph_string(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

std::string format_graph(const MixedGraph& g) {
    std::ostringstream out;
    for (const auto& n : g.nodes()) out << "node " << n << '\n';
    for (const auto& e : g.edges()) out << e.to_string() << '\n';
    return out.str();
}

MixedGraph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    return parse_graph(in);
}

void write_graph_file(const std::string& path, const MixedGraph& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << format_graph(g);
}

}  // namespace sedbn
