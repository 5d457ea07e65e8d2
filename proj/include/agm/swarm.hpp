#pragma once

// The materialized AGM graph and its decomposition into components, cycles and
// structural roles.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agm/agm.hpp"
#include "agm/field.hpp"

namespace agm {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = UINT32_MAX;

/// Largest q materialized unless raised explicitly (about 8.4M vertices).
inline constexpr std::uint64_t kDefaultGraphBound = 4096;

class GraphBoundError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct BuildOptions {
  std::uint64_t max_q = kDefaultGraphBound;
  /// Worker threads for construction; 0 picks hardware concurrency.
  unsigned threads = 0;
};

/// Union-find over dense ids with path halving and union by size.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t x, std::size_t y);
  std::size_t size_of(std::size_t x) { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

class SwarmGraph {
 public:
  /// Enumerates every vertex and its children. Throws GraphBoundError above max_q.
  static SwarmGraph build(FieldCtx ctx, const BuildOptions& options = {});

  const FieldCtx& ctx() const { return *ctx_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  /// Vertices are numbered in (index(a), index(b)) order.
  const Vertex& vertex(VertexId id) const { return vertices_[id]; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  std::optional<VertexId> find(const Vertex& v) const;

  std::span<const VertexId> children(VertexId id) const { return {child_[id].data(), child_count_[id]}; }
  std::span<const VertexId> parents(VertexId id) const { return {parent_[id].data(), parent_count_[id]}; }
  bool has_edge(VertexId from, VertexId to) const;

  /// Drops one edge; used to build deliberately broken fixtures.
  void remove_edge(VertexId from, VertexId to);

  /// Non-fatal notes from construction (unsupported residue class, count mismatch).
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  SwarmGraph() = default;

  std::shared_ptr<const FieldCtx> ctx_;
  std::vector<Vertex> vertices_;
  std::vector<std::uint32_t> row_start_;
  std::vector<std::array<VertexId, 2>> child_;
  std::vector<std::array<VertexId, 2>> parent_;
  std::vector<std::uint8_t> child_count_;
  std::vector<std::uint8_t> parent_count_;
  std::size_t edge_count_ = 0;
  std::vector<std::string> warnings_;
};

/// Closed-form vertex count: (q-1)(q-3)/2 for q = 3 mod 4, (q-1)(q-5)/2 otherwise.
std::uint64_t expected_vertex_count(std::uint64_t q);

enum class Role : std::uint8_t {
  unassigned,
  cycle,             // c
  cycle_child_leaf,  // u
  cycle_parent,      // v
  grandparent,       // w
  grandparent_leaf,  // x
  head,
  tentacle,
  isolated,
};

std::string_view to_string(Role r);

struct Component {
  std::size_t id = 0;
  std::vector<VertexId> vertices;  // ascending
  std::vector<VertexId> cycle;     // starts at the smallest cycle vertex
  std::vector<Role> roles;         // aligned with vertices
  /// Set when cycle finding or role assignment rejected the component.
  std::optional<std::string> structure_error;

  bool trivial() const { return vertices.size() == 1; }
  bool contains(VertexId v) const;
  Role role_of(VertexId v) const;
};

/// Weakly connected components, numbered by their smallest vertex.
std::vector<Component> components(const SwarmGraph& graph);

/// Two-sided peeling: repeatedly drop vertices with no surviving child or no
/// surviving parent. What survives must be a single simple directed cycle,
/// otherwise StructureViolation is thrown.
std::vector<VertexId> find_cycle(const SwarmGraph& graph, const Component& component);

/// Role labels aligned with component.vertices. Expects component.cycle to be set.
/// Throws StructureViolation whenever the component deviates from the expected shape.
std::vector<Role> assign_roles(const SwarmGraph& graph, const Component& component, ModClass mc);

struct SwarmAnalysis {
  std::vector<Component> components;
  std::vector<std::uint32_t> component_of;  // per vertex id
  /// False for q = 1 mod 8, where cycles and roles are not computed.
  bool structure_analyzed = false;

  std::size_t structure_errors() const;
};

/// components + find_cycle + assign_roles; violations are recorded per component.
SwarmAnalysis analyze(const SwarmGraph& graph);

struct CycleCensus {
  std::uint64_t q = 0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::size_t components_total = 0;
  std::size_t components_nontrivial = 0;
  std::size_t components_trivial = 0;
  std::map<std::size_t, std::size_t> component_sizes;  // n -> N_n
  std::map<std::size_t, std::size_t> cycle_lengths;    // n -> M_n
};

CycleCensus census(const SwarmGraph& graph, const SwarmAnalysis& analysis);

/// "n1:m1;n2:m2" sorted by n.
std::string format_histogram(const std::map<std::size_t, std::size_t>& histogram);

}  // namespace agm
