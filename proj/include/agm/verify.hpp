#pragma once

// Exhaustive checkers for the counting, divisibility and structure results on
// the AGM graph, plus the constructive searches behind the existence results.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "agm/swarm.hpp"
#include "json.hpp"

namespace agm {

enum class CheckStatus { pass, fail, not_applicable };

std::string_view to_string(CheckStatus s);

struct CheckRecord {
  std::string name;
  std::string anchor;  // the result being checked, in words
  CheckStatus status = CheckStatus::not_applicable;
  nlohmann::json witness;  // counterexample on failure, summary data otherwise
};

struct VerificationReport {
  std::uint64_t q = 0;
  std::uint32_t p = 0;
  unsigned k = 0;
  ModClass mod_class = ModClass::three_mod_4;
  std::vector<CheckRecord> checks;

  bool all_passed() const;
  const CheckRecord* find(std::string_view name) const;
  nlohmann::json to_json() const;
};

struct Edge {
  Vertex from;
  Vertex to;
};

CheckRecord check_vertex_count(const SwarmGraph& graph);
CheckRecord check_child_counts(const SwarmGraph& graph);
/// Parents computed from the closed form agree with the reversed edge list.
CheckRecord check_parent_lemma(const SwarmGraph& graph);
CheckRecord check_automorphisms(const SwarmGraph& graph);
CheckRecord check_two_step_square(const SwarmGraph& graph);

/// "all-square", "all-non-square", "alternating", "trivial", or "mixed" (a violation).
std::string alternation_class(const SwarmGraph& graph, const Component& component);
CheckRecord check_alternation(const SwarmGraph& graph, const Component& component);
CheckRecord check_alternation(const SwarmGraph& graph, const SwarmAnalysis& analysis);

CheckRecord check_divisibility(const SwarmGraph& graph, const SwarmAnalysis& analysis, const CycleCensus& census);
CheckRecord check_odd_cycle_parity(const SwarmGraph& graph, const SwarmAnalysis& analysis, const CycleCensus& census);
CheckRecord check_cycle_lengths(const SwarmAnalysis& analysis);

CheckRecord check_structure(const SwarmGraph& graph, const Component& component, ModClass mc);
CheckRecord check_structure(const SwarmGraph& graph, const SwarmAnalysis& analysis);

/// AGM step and sequence semantics agree with the graph.
CheckRecord check_agm_steps(const SwarmGraph& graph, const SwarmAnalysis& analysis);

CheckRecord check_nontrivial_exists(const SwarmGraph& graph, const SwarmAnalysis& analysis);

/// Tries (g^2,1), (g^4,1), (g^6,1) and falls back to (g^4+1, g^2), g the
/// smallest generator. Requires q = 5 mod 8 and q >= 29.
Vertex find_parented_vertex_constructive(const FieldCtx& ctx);

/// Searches x^4 + y^4 = 2g^2 and returns (x^4, y^4) -> (g^2, x^2 y^2), or
/// nullopt when no solution yields a valid edge.
std::optional<Edge> search_fourth_power_edge(const FieldCtx& ctx);

/// Known cycle vertices in all-square components for the fields below 81.
std::optional<Vertex> listed_square_cycle_vertex(const FieldCtx& ctx);

/// An edge between square vertices: by search for q > 81, from the listed
/// cycle vertex for q in {29, 37, 53, 61}. Requires q = 5 mod 8 and q >= 29.
Edge find_square_edge_constructive(const FieldCtx& ctx);

CheckRecord check_parented_vertex(const SwarmGraph& graph);
CheckRecord check_square_component(const SwarmGraph& graph, const SwarmAnalysis& analysis);

/// Every check, in a fixed order, each exactly once.
VerificationReport verify(const SwarmGraph& graph, const SwarmAnalysis& analysis);

}  // namespace agm
