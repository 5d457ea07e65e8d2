#pragma once

// Vertices of the AGM graph, parent/child relations, the scaling automorphisms,
// and AGM sequences for q = 3 mod 4 and q = 5 mod 8.

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "agm/field.hpp"

namespace agm {

/// A pair (a, b) of nonzero elements with ab a square and a != +-b.
struct Vertex {
  FieldElement a;
  FieldElement b;

  friend constexpr auto operator<=>(const Vertex&, const Vertex&) = default;
};

enum class VertexRejection : std::uint8_t { zero_coordinate, nonsquare_product, equal_coordinates, opposite_coordinates };

std::string_view to_string(VertexRejection r);

class VertexError : public std::invalid_argument {
 public:
  explicit VertexError(VertexRejection reason);
  VertexRejection reason() const { return reason_; }

 private:
  VertexRejection reason_;
};

/// Reason the pair is not a vertex, or nullopt if it is one.
std::optional<VertexRejection> vertex_rejection(const FieldCtx& ctx, FieldElement a, FieldElement b);
inline bool is_vertex(const FieldCtx& ctx, FieldElement a, FieldElement b) { return !vertex_rejection(ctx, a, b); }
/// Throws VertexError when (a, b) is not a vertex.
Vertex make_vertex(const FieldCtx& ctx, FieldElement a, FieldElement b);

std::string format_vertex(const FieldCtx& ctx, const Vertex& v);

/// At most two neighbours; every vertex has 0-2 children and 0 or 2 parents.
class Neighbors {
 public:
  void push(const Vertex& v) { slots_.at(count_++) = v; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  const Vertex& operator[](std::size_t i) const { return slots_[i]; }
  const Vertex* begin() const { return slots_.data(); }
  const Vertex* end() const { return slots_.data() + count_; }
  bool contains(const Vertex& v) const;

 private:
  std::array<Vertex, 2> slots_{};
  std::size_t count_ = 0;
};

/// Children (c, +-d) with c = (a+b)/2, d^2 = ab, sorted by the index of d.
Neighbors children(const FieldCtx& ctx, const Vertex& v);

/// Parents (a+S, a-S), (a-S, a+S) with S^2 = a^2 - b^2, sorted by first
/// coordinate; empty when a^2 - b^2 is a non-square.
Neighbors parents(const FieldCtx& ctx, const Vertex& v);

/// The automorphism (a, b) -> (alpha a, alpha b). Throws FieldError for alpha = 0.
Vertex scale(const FieldCtx& ctx, FieldElement alpha, const Vertex& v);

/// Both coordinates are squares.
bool is_square_vertex(const FieldCtx& ctx, const Vertex& v);

enum class SequenceFailure : std::uint8_t { wrong_mod_class, unsupported_mod_class, childless_start };

class SequenceError : public std::domain_error {
 public:
  SequenceError(SequenceFailure failure, const std::string& what);
  SequenceFailure failure() const { return failure_; }

 private:
  SequenceFailure failure_;
};

/// A structure theorem failed to hold. Carries a description of the witness.
class StructureViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// One AGM step for q = 3 mod 4: ((a+b)/2, the root of ab with the character of (a+b)/2).
Vertex agm_step_3mod4(const FieldCtx& ctx, const Vertex& v);

/// One AGM step for q = 5 mod 8: the unique child that itself has children.
Vertex agm_step_5mod8(const FieldCtx& ctx, const Vertex& v);

/// Eventually periodic sequence; the period repeats forever after the preperiod.
struct AgmSequence {
  std::vector<Vertex> preperiod;
  std::vector<Vertex> period;
};

/// Iterates the AGM step for the field's residue class until a vertex repeats.
/// Throws SequenceError for q = 1 mod 8 and for childless starts when q = 5 mod 8.
AgmSequence agm_sequence(const FieldCtx& ctx, const Vertex& start);

}  // namespace agm
