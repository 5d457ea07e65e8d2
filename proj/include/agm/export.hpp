#pragma once

// DOT and JSON renderings of the AGM graph. Output is deterministic for fixed (p, k).

#include <cstddef>
#include <optional>
#include <ostream>
#include <string_view>

#include "agm/swarm.hpp"
#include "json.hpp"

namespace agm {

enum class ExportFormat { dot, json };

/// Accepts "dot" or "json"; throws std::invalid_argument otherwise.
ExportFormat parse_export_format(std::string_view name);

/// One node per vertex labelled "a,b"; cycle vertices get shape=doublecircle and
/// square vertices style=filled. Restricted to one component when `only` is set.
void write_dot(std::ostream& out, const SwarmGraph& graph, const SwarmAnalysis& analysis,
               std::optional<std::size_t> only = std::nullopt);

/// {q, p, k, components: [{id, cycle_length, vertices: [{a, b, role, square}], edges: [[i, j]]}]}
/// where edge endpoints index the component's vertex list.
nlohmann::json graph_to_json(const SwarmGraph& graph, const SwarmAnalysis& analysis,
                             std::optional<std::size_t> only = std::nullopt);

void write_export(std::ostream& out, const SwarmGraph& graph, const SwarmAnalysis& analysis, ExportFormat format,
                  std::optional<std::size_t> only = std::nullopt);

}  // namespace agm
