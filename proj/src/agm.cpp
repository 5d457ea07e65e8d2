#include "agm/agm.hpp"

#include <algorithm>
#include <map>

namespace agm {

std::string_view to_string(VertexRejection r) {
  switch (r) {
    case VertexRejection::zero_coordinate: return "a coordinate is zero";
    case VertexRejection::nonsquare_product: return "the product ab is not a square";
    case VertexRejection::equal_coordinates: return "a = b";
    case VertexRejection::opposite_coordinates: return "a = -b";
  }
  return "?";
}

VertexError::VertexError(VertexRejection reason)
    : std::invalid_argument("not a vertex: " + std::string(to_string(reason))), reason_(reason) {}

SequenceError::SequenceError(SequenceFailure failure, const std::string& what)
    : std::domain_error(what), failure_(failure) {}

std::optional<VertexRejection> vertex_rejection(const FieldCtx& ctx, FieldElement a, FieldElement b) {
  if (a.index == 0 || b.index == 0) return VertexRejection::zero_coordinate;
  if (a == b) return VertexRejection::equal_coordinates;
  if (a == ctx.neg(b)) return VertexRejection::opposite_coordinates;
  if (ctx.quadratic_character(ctx.mul(a, b)) != 1) return VertexRejection::nonsquare_product;
  return std::nullopt;
}

Vertex make_vertex(const FieldCtx& ctx, FieldElement a, FieldElement b) {
  if (const auto r = vertex_rejection(ctx, a, b)) throw VertexError(*r);
  return {a, b};
}

std::string format_vertex(const FieldCtx& ctx, const Vertex& v) {
  if (ctx.is_prime_field()) return "(" + ctx.format(v.a) + "," + ctx.format(v.b) + ")";
  return "((" + ctx.format(v.a) + "),(" + ctx.format(v.b) + "))";
}

bool Neighbors::contains(const Vertex& v) const { return std::find(begin(), end(), v) != end(); }

Neighbors children(const FieldCtx& ctx, const Vertex& v) {
  Neighbors out;
  const FieldElement c = ctx.half(ctx.add(v.a, v.b));
  const auto roots = ctx.sqrt(ctx.mul(v.a, v.b));
  if (!roots) throw StructureViolation("vertex " + format_vertex(ctx, v) + " has a non-square product");
  for (FieldElement d : {roots->low, roots->high}) {
    if (is_vertex(ctx, c, d)) out.push({c, d});
  }
  return out;
}

Neighbors parents(const FieldCtx& ctx, const Vertex& v) {
  Neighbors out;
  const FieldElement disc = ctx.sub(ctx.mul(v.a, v.a), ctx.mul(v.b, v.b));
  if (disc.index == 0 || ctx.quadratic_character(disc) != 1) return out;
  const FieldElement s = ctx.sqrt(disc)->low;
  Vertex first{ctx.add(v.a, s), ctx.sub(v.a, s)};
  Vertex second{first.b, first.a};
  if (second.a < first.a) std::swap(first, second);
  for (const Vertex& u : {first, second}) {
    if (!is_vertex(ctx, u.a, u.b)) {
      throw StructureViolation("parent candidate " + format_vertex(ctx, u) + " of " + format_vertex(ctx, v) +
                               " is not a vertex");
    }
    out.push(u);
  }
  return out;
}

Vertex scale(const FieldCtx& ctx, FieldElement alpha, const Vertex& v) {
  if (alpha.index == 0) throw FieldError("automorphism scale must be nonzero");
  return {ctx.mul(alpha, v.a), ctx.mul(alpha, v.b)};
}

bool is_square_vertex(const FieldCtx& ctx, const Vertex& v) { return ctx.quadratic_character(v.a) == 1; }

Vertex agm_step_3mod4(const FieldCtx& ctx, const Vertex& v) {
  if (ctx.mod_class() != ModClass::three_mod_4) {
    throw SequenceError(SequenceFailure::wrong_mod_class, "this AGM step requires q = 3 mod 4");
  }
  const FieldElement mean = ctx.half(ctx.add(v.a, v.b));
  const int sign = ctx.quadratic_character(mean);
  const Vertex next{mean, ctx.signed_sqrt(ctx.mul(v.a, v.b), sign)};
  if (!is_vertex(ctx, next.a, next.b)) {
    throw StructureViolation("AGM step from " + format_vertex(ctx, v) + " left the vertex set");
  }
  return next;
}

Vertex agm_step_5mod8(const FieldCtx& ctx, const Vertex& v) {
  if (ctx.mod_class() != ModClass::five_mod_8) {
    throw SequenceError(SequenceFailure::wrong_mod_class, "this AGM step requires q = 5 mod 8");
  }
  const Neighbors kids = children(ctx, v);
  if (kids.empty()) {
    throw SequenceError(SequenceFailure::childless_start,
                        "vertex " + format_vertex(ctx, v) + " has no children; no infinite AGM sequence exists");
  }
  if (kids.size() != 2) throw StructureViolation("vertex " + format_vertex(ctx, v) + " has exactly one child");
  const bool first = !children(ctx, kids[0]).empty();
  const bool second = !children(ctx, kids[1]).empty();
  if (first == second) {
    throw StructureViolation("children of " + format_vertex(ctx, v) + (first ? " both" : " neither") +
                             " have children");
  }
  return first ? kids[0] : kids[1];
}

AgmSequence agm_sequence(const FieldCtx& ctx, const Vertex& start) {
  make_vertex(ctx, start.a, start.b);
  std::size_t max_preperiod = 0;
  Vertex (*step)(const FieldCtx&, const Vertex&) = nullptr;
  switch (ctx.mod_class()) {
    case ModClass::three_mod_4:
      step = agm_step_3mod4;
      max_preperiod = 1;
      break;
    case ModClass::five_mod_8:
      step = agm_step_5mod8;
      max_preperiod = 2;
      break;
    case ModClass::one_mod_8:
      throw SequenceError(SequenceFailure::unsupported_mod_class,
                          "AGM sequences are not defined for q = 1 mod 8 (no elementary root selection rule)");
  }

  std::vector<Vertex> trail;
  std::map<Vertex, std::size_t> seen;
  Vertex cur = start;
  while (true) {
    if (const auto it = seen.find(cur); it != seen.end()) {
      AgmSequence seq;
      seq.preperiod.assign(trail.begin(), trail.begin() + static_cast<std::ptrdiff_t>(it->second));
      seq.period.assign(trail.begin() + static_cast<std::ptrdiff_t>(it->second), trail.end());
      if (seq.preperiod.size() > max_preperiod) {
        throw StructureViolation("AGM sequence from " + format_vertex(ctx, start) + " has preperiod " +
                                 std::to_string(seq.preperiod.size()));
      }
      return seq;
    }
    seen.emplace(cur, trail.size());
    trail.push_back(cur);
    cur = step(ctx, cur);
  }
}

}  // namespace agm
