#include "agm/export.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace agm {

namespace {

std::string dot_label(const FieldCtx& ctx, const Vertex& v) {
  if (ctx.is_prime_field()) return ctx.format(v.a) + "," + ctx.format(v.b);
  return "(" + ctx.format(v.a) + "),(" + ctx.format(v.b) + ")";
}

nlohmann::json element_json(const FieldCtx& ctx, FieldElement x) {
  if (ctx.is_prime_field()) return x.index;
  return ctx.coeffs(x);
}

template <typename Fn>
void for_each_selected(const SwarmAnalysis& analysis, std::optional<std::size_t> only, Fn&& fn) {
  if (only) {
    if (*only >= analysis.components.size()) {
      throw std::out_of_range("component " + std::to_string(*only) + " does not exist");
    }
    fn(analysis.components[*only]);
    return;
  }
  for (const Component& c : analysis.components) fn(c);
}

}  // namespace

ExportFormat parse_export_format(std::string_view name) {
  if (name == "dot") return ExportFormat::dot;
  if (name == "json") return ExportFormat::json;
  throw std::invalid_argument("unknown export format '" + std::string(name) + "'");
}

void write_dot(std::ostream& out, const SwarmGraph& graph, const SwarmAnalysis& analysis,
               std::optional<std::size_t> only) {
  const FieldCtx& ctx = graph.ctx();
  out << "digraph agm_" << ctx.order() << " {\n";
  for_each_selected(analysis, only, [&](const Component& comp) {
    std::vector<VertexId> cycle = comp.cycle;
    std::sort(cycle.begin(), cycle.end());
    out << "  // component " << comp.id << "\n";
    for (VertexId v : comp.vertices) {
      out << "  v" << v << " [label=\"" << dot_label(ctx, graph.vertex(v)) << "\"";
      if (std::binary_search(cycle.begin(), cycle.end(), v)) out << ", shape=doublecircle";
      if (is_square_vertex(ctx, graph.vertex(v))) out << ", style=filled";
      out << "];\n";
    }
    for (VertexId v : comp.vertices) {
      for (VertexId w : graph.children(v)) out << "  v" << v << " -> v" << w << ";\n";
    }
  });
  out << "}\n";
}

nlohmann::json graph_to_json(const SwarmGraph& graph, const SwarmAnalysis& analysis, std::optional<std::size_t> only) {
  const FieldCtx& ctx = graph.ctx();
  nlohmann::json doc;
  doc["q"] = ctx.order();
  doc["p"] = ctx.characteristic();
  doc["k"] = ctx.degree();
  doc["components"] = nlohmann::json::array();
  for_each_selected(analysis, only, [&](const Component& comp) {
    nlohmann::json jc;
    jc["id"] = comp.id;
    jc["cycle_length"] = comp.cycle.size();
    jc["vertices"] = nlohmann::json::array();
    jc["edges"] = nlohmann::json::array();
    for (VertexId v : comp.vertices) {
      const Vertex& vx = graph.vertex(v);
      jc["vertices"].push_back({{"a", element_json(ctx, vx.a)},
                                {"b", element_json(ctx, vx.b)},
                                {"role", std::string(to_string(comp.role_of(v)))},
                                {"square", is_square_vertex(ctx, vx)}});
    }
    for (std::size_t i = 0; i < comp.vertices.size(); ++i) {
      for (VertexId w : graph.children(comp.vertices[i])) {
        const auto j = std::lower_bound(comp.vertices.begin(), comp.vertices.end(), w) - comp.vertices.begin();
        jc["edges"].push_back({i, j});
      }
    }
    doc["components"].push_back(std::move(jc));
  });
  return doc;
}

void write_export(std::ostream& out, const SwarmGraph& graph, const SwarmAnalysis& analysis, ExportFormat format,
                  std::optional<std::size_t> only) {
  if (format == ExportFormat::dot) {
    write_dot(out, graph, analysis, only);
  } else {
    out << graph_to_json(graph, analysis, only).dump(2) << "\n";
  }
}

}  // namespace agm
