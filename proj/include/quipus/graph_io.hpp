#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "quipus/graph.hpp"

namespace quipus {

/// GraphML with two node attributes: `label` (class name) and `row` (row id).
void write_graphml(std::ostream& out, const LabeledGraph& g, std::span<const std::string> class_names,
                   const std::string& graph_id = "G");
void write_graphml(const std::filesystem::path& path, const LabeledGraph& g,
                   std::span<const std::string> class_names, const std::string& graph_id = "G");

/// Graphviz DOT, nodes colored by class.
void write_dot(std::ostream& out, const LabeledGraph& g, std::span<const std::string> class_names,
               const std::string& graph_id = "G");
void write_dot(const std::filesystem::path& path, const LabeledGraph& g,
               std::span<const std::string> class_names, const std::string& graph_id = "G");

}  // namespace quipus
