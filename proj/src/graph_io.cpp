#include "quipus/graph_io.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

namespace quipus {

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(ch);
        }
    }
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out.push_back('\\');
        out.push_back(ch);
    }
    return out;
}

std::string class_name(std::span<const std::string> names, ClassId c) {
    const auto i = static_cast<std::size_t>(c);
    return i < names.size() ? names[i] : std::to_string(c);
}

std::ofstream open_or_throw(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

constexpr std::array<const char*, 10> kPalette = {"#e41a1c", "#4daf4a", "#377eb8", "#984ea3", "#ff7f00",
                                                  "#a65628", "#f781bf", "#999999", "#66c2a5", "#ffd92f"};

}  // namespace

void write_graphml(std::ostream& out, const LabeledGraph& g, std::span<const std::string> class_names,
                   const std::string& graph_id) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
           "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
           "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
           "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
           "  <key id=\"d0\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
           "  <key id=\"d1\" for=\"node\" attr.name=\"row\" attr.type=\"long\"/>\n";
    out << "  <graph id=\"" << xml_escape(graph_id) << "\" edgedefault=\"undirected\">\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out << "    <node id=\"n" << v << "\">\n"
            << "      <data key=\"d0\">" << xml_escape(class_name(class_names, g.label(v))) << "</data>\n"
            << "      <data key=\"d1\">" << static_cast<long long>(g.row_id(v)) << "</data>\n"
            << "    </node>\n";
    }
    std::size_t e = 0;
    for (auto [u, v] : g.edges()) {
        out << "    <edge id=\"e" << e++ << "\" source=\"n" << u << "\" target=\"n" << v << "\"/>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

void write_graphml(const std::filesystem::path& path, const LabeledGraph& g,
                   std::span<const std::string> class_names, const std::string& graph_id) {
    auto out = open_or_throw(path);
    write_graphml(out, g, class_names, graph_id);
}

void write_dot(std::ostream& out, const LabeledGraph& g, std::span<const std::string> class_names,
               const std::string& graph_id) {
    out << "graph \"" << dot_escape(graph_id) << "\" {\n  node [style=filled];\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const auto c = static_cast<std::size_t>(g.label(v));
        out << "  n" << v << " [label=\"" << dot_escape(class_name(class_names, g.label(v)))
            << "\", row=" << g.row_id(v) << ", fillcolor=\"" << kPalette[c % kPalette.size()] << "\"];\n";
    }
    for (auto [u, v] : g.edges()) out << "  n" << u << " -- n" << v << ";\n";
    out << "}\n";
}

void write_dot(const std::filesystem::path& path, const LabeledGraph& g,
               std::span<const std::string> class_names, const std::string& graph_id) {
    auto out = open_or_throw(path);
    write_dot(out, g, class_names, graph_id);
}

}  // namespace quipus
