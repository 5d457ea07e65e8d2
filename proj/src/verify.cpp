#include "agm/verify.hpp"

#include <algorithm>
#include <map>

namespace agm {

namespace {

using nlohmann::json;

CheckRecord record(std::string name, std::string anchor) {
  CheckRecord r;
  r.name = std::move(name);
  r.anchor = std::move(anchor);
  r.status = CheckStatus::pass;
  return r;
}

CheckRecord not_applicable(CheckRecord r, const std::string& why) {
  r.status = CheckStatus::not_applicable;
  r.witness = {{"reason", why}};
  return r;
}

CheckRecord failed(CheckRecord r, json witness) {
  r.status = CheckStatus::fail;
  r.witness = std::move(witness);
  return r;
}

std::string fmt(const SwarmGraph& g, VertexId v) { return format_vertex(g.ctx(), g.vertex(v)); }
std::string fmt(const FieldCtx& ctx, const Vertex& v) { return format_vertex(ctx, v); }

bool structured(ModClass mc) { return mc == ModClass::three_mod_4 || mc == ModClass::five_mod_8; }

bool is_square(const SwarmGraph& g, VertexId v) { return is_square_vertex(g.ctx(), g.vertex(v)); }

// cycle length per vertex; 0 off cycles
std::vector<std::uint32_t> cycle_length_map(const SwarmGraph& g, const SwarmAnalysis& a) {
  std::vector<std::uint32_t> len(g.vertex_count(), 0);
  for (const Component& c : a.components) {
    for (VertexId v : c.cycle) len[v] = static_cast<std::uint32_t>(c.cycle.size());
  }
  return len;
}

void require_five_mod_8_from_29(const FieldCtx& ctx) {
  if (ctx.mod_class() != ModClass::five_mod_8) throw std::invalid_argument("requires q = 5 mod 8");
  if (ctx.order() < 29) throw std::invalid_argument("requires q >= 29");
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "not-applicable";
  }
  return "?";
}

bool VerificationReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == CheckStatus::fail; });
}

const CheckRecord* VerificationReport::find(std::string_view name) const {
  for (const CheckRecord& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

json VerificationReport::to_json() const {
  json doc;
  doc["q"] = q;
  doc["p"] = p;
  doc["k"] = k;
  doc["mod_class"] = std::string(to_string(mod_class));
  doc["checks"] = json::array();
  for (const CheckRecord& c : checks) {
    doc["checks"].push_back(
        {{"name", c.name}, {"anchor", c.anchor}, {"status", std::string(to_string(c.status))}, {"witness", c.witness}});
  }
  return doc;
}

CheckRecord check_vertex_count(const SwarmGraph& graph) {
  auto r = record("vertex_count", "closed-form vertex count: (q-1)(q-3)/2 for q = 3 mod 4, (q-1)(q-5)/2 for q = 5 mod 8");
  const std::uint64_t q = graph.ctx().order();
  if (!structured(graph.ctx().mod_class())) return not_applicable(std::move(r), "no closed form for q = 1 mod 8");
  const std::uint64_t expected = expected_vertex_count(q);
  r.witness = {{"vertices", graph.vertex_count()}, {"expected", expected}};
  if (graph.vertex_count() != expected) r.status = CheckStatus::fail;
  return r;
}

CheckRecord check_child_counts(const SwarmGraph& graph) {
  const ModClass mc = graph.ctx().mod_class();
  auto r = record("child_count", "exactly one child when q = 3 mod 4; zero or two children when q = 1 mod 4, "
                                 "the two sharing the first coordinate with opposite second coordinates");
  std::size_t histogram[3] = {};
  const FieldCtx& ctx = graph.ctx();
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    const auto kids = graph.children(v);
    ++histogram[kids.size()];
    const bool ok = mc == ModClass::three_mod_4 ? kids.size() == 1 : kids.size() != 1;
    if (!ok) return failed(std::move(r), {{"vertex", fmt(graph, v)}, {"children", kids.size()}});
    if (kids.size() == 2) {
      const Vertex& x = graph.vertex(kids[0]);
      const Vertex& y = graph.vertex(kids[1]);
      if (x.a != y.a || x.b != ctx.neg(y.b)) {
        return failed(std::move(r), {{"vertex", fmt(graph, v)}, {"children", {fmt(graph, kids[0]), fmt(graph, kids[1])}}});
      }
    }
  }
  r.witness = {{"childless", histogram[0]}, {"one_child", histogram[1]}, {"two_children", histogram[2]}};
  return r;
}

CheckRecord check_parent_lemma(const SwarmGraph& graph) {
  auto r = record("parent_lemma", "a vertex has parents iff a^2-b^2 is a square, and then exactly "
                                  "(a+S,a-S) and (a-S,a+S) with S^2 = a^2-b^2");
  const FieldCtx& ctx = graph.ctx();
  std::size_t with_parents = 0;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    const Vertex& vx = graph.vertex(v);
    const Neighbors predicted = parents(ctx, vx);
    const auto actual = graph.parents(v);
    const FieldElement disc = ctx.sub(ctx.mul(vx.a, vx.a), ctx.mul(vx.b, vx.b));
    const bool square_disc = ctx.quadratic_character(disc) == 1;
    bool ok = predicted.size() == actual.size() && (square_disc == !actual.empty());
    for (VertexId u : actual) ok = ok && predicted.contains(graph.vertex(u));
    if (predicted.size() == 2) {
      ok = ok && predicted[0].a == predicted[1].b && predicted[0].b == predicted[1].a;
    }
    if (!ok) {
      json seen = json::array();
      for (VertexId u : actual) seen.push_back(fmt(graph, u));
      json expect = json::array();
      for (const Vertex& u : predicted) expect.push_back(fmt(ctx, u));
      return failed(std::move(r), {{"vertex", fmt(graph, v)}, {"graph_parents", seen}, {"predicted", expect}});
    }
    if (!actual.empty()) ++with_parents;
  }
  r.witness = {{"vertices_with_parents", with_parents}};
  return r;
}

CheckRecord check_automorphisms(const SwarmGraph& graph) {
  auto r = record("automorphisms", "scaling (a,b) -> (ga,gb) by a generator g preserves vertices and edges, "
                                   "and every orbit of the scaling group has q-1 elements");
  const FieldCtx& ctx = graph.ctx();
  const FieldElement g = ctx.primitive_element();
  const std::size_t n = graph.vertex_count();
  std::vector<VertexId> image(n, kNoVertex);
  std::vector<std::uint8_t> hit(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    const auto w = graph.find(scale(ctx, g, graph.vertex(v)));
    if (!w) return failed(std::move(r), {{"vertex", fmt(graph, v)}, {"reason", "image is not a vertex"}});
    if (hit[*w]) return failed(std::move(r), {{"vertex", fmt(graph, v)}, {"reason", "scaling is not injective"}});
    hit[*w] = 1;
    image[v] = *w;
  }
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId w : graph.children(v)) {
      if (!graph.has_edge(image[v], image[w])) {
        return failed(std::move(r), {{"edge", {fmt(graph, v), fmt(graph, w)}}, {"reason", "image of edge is missing"}});
      }
    }
  }
  std::vector<std::uint8_t> seen(n, 0);
  std::size_t orbits = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (seen[v]) continue;
    std::size_t size = 0;
    VertexId w = v;
    do {
      seen[w] = 1;
      ++size;
      w = image[w];
    } while (w != v && size <= ctx.order());
    if (size != ctx.order() - 1u) {
      return failed(std::move(r), {{"vertex", fmt(graph, v)}, {"orbit_size", size}});
    }
    ++orbits;
  }
  r.witness = {{"generator", ctx.format(g)}, {"orbits", orbits}};
  return r;
}

CheckRecord check_two_step_square(const SwarmGraph& graph) {
  auto r = record("two_step_square", "on a path u -> m -> w, u is a square vertex iff w is");
  std::size_t paths = 0;
  for (VertexId u = 0; u < graph.vertex_count(); ++u) {
    for (VertexId m : graph.children(u)) {
      for (VertexId w : graph.children(m)) {
        ++paths;
        if (is_square(graph, u) != is_square(graph, w)) {
          return failed(std::move(r), {{"path", {fmt(graph, u), fmt(graph, m), fmt(graph, w)}}});
        }
      }
    }
  }
  r.witness = {{"paths", paths}};
  return r;
}

std::string alternation_class(const SwarmGraph& graph, const Component& comp) {
  std::size_t square = 0, nonsquare = 0, mixed = 0;
  for (VertexId v : comp.vertices) {
    for (VertexId w : graph.children(v)) {
      const bool sv = is_square(graph, v), sw = is_square(graph, w);
      if (sv && sw) {
        ++square;
      } else if (!sv && !sw) {
        ++nonsquare;
      } else {
        ++mixed;
      }
    }
  }
  if (square + nonsquare + mixed == 0) return "trivial";
  if (mixed == 0 && nonsquare == 0) return "all-square";
  if (mixed == 0 && square == 0) return "all-non-square";
  if (square == 0 && nonsquare == 0) return "alternating";
  return "mixed";
}

CheckRecord check_alternation(const SwarmGraph& graph, const Component& comp) {
  auto r = record("alternation", "a component is all-square, all-non-square, or alternates along every edge");
  const std::string cls = alternation_class(graph, comp);
  r.witness = {{"component", comp.id}, {"class", cls}};
  if (cls == "mixed") r.status = CheckStatus::fail;
  return r;
}

CheckRecord check_alternation(const SwarmGraph& graph, const SwarmAnalysis& analysis) {
  auto r = record("alternation", "a component is all-square, all-non-square, or alternates along every edge");
  std::map<std::string, std::size_t> classes;
  for (const Component& c : analysis.components) {
    CheckRecord one = check_alternation(graph, c);
    if (one.status == CheckStatus::fail) {
      one.witness["first_vertex"] = fmt(graph, c.vertices.front());
      return one;
    }
    ++classes[one.witness["class"].get<std::string>()];
  }
  r.witness = classes;
  return r;
}

CheckRecord check_divisibility(const SwarmGraph& graph, const SwarmAnalysis& analysis, const CycleCensus& census) {
  auto r = record("orbit_divisibility", "(q-1) divides n*M_n: scaling orbits partition the vertices on "
                                        "cycles of each length into classes of size q-1");
  if (!analysis.structure_analyzed) return not_applicable(std::move(r), "cycles are not computed for q = 1 mod 8");
  const FieldCtx& ctx = graph.ctx();
  const std::uint64_t q1 = ctx.order() - 1u;
  const FieldElement g = ctx.primitive_element();
  const auto len = cycle_length_map(graph, analysis);
  std::vector<std::uint8_t> seen(graph.vertex_count(), 0);
  json per_length = json::object();
  for (const auto& [n, m] : census.cycle_lengths) {
    std::size_t orbits = 0;
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
      if (len[v] != n || seen[v]) continue;
      std::size_t size = 0;
      Vertex w = graph.vertex(v);
      do {
        const auto id = graph.find(w);
        if (!id || len[*id] != n) {
          return failed(std::move(r), {{"cycle_length", n}, {"vertex", fmt(graph, v)}, {"image", fmt(ctx, w)},
                                       {"reason", "scaling leaves the set of cycle vertices of this length"}});
        }
        seen[*id] = 1;
        ++size;
        w = scale(ctx, g, w);
      } while (w != graph.vertex(v) && size <= q1);
      if (size != q1) return failed(std::move(r), {{"cycle_length", n}, {"vertex", fmt(graph, v)}, {"orbit_size", size}});
      ++orbits;
    }
    const std::uint64_t nm = std::uint64_t{n} * m;
    per_length[std::to_string(n)] = {{"M_n", m}, {"n_M_n", nm}, {"orbits", orbits}};
    if (nm % q1 != 0) return failed(std::move(r), {{"cycle_length", n}, {"M_n", m}, {"q_minus_1", q1}});
  }
  r.witness = per_length;
  return r;
}

CheckRecord check_odd_cycle_parity(const SwarmGraph& graph, const SwarmAnalysis& analysis, const CycleCensus& census) {
  auto r = record("odd_cycle_parity", "M_n is even for odd n; each odd cycle is all-square or all-non-square "
                                      "and both kinds occur equally often");
  if (!analysis.structure_analyzed) return not_applicable(std::move(r), "cycles are not computed for q = 1 mod 8");
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_type;  // n -> (square, non-square)
  for (const Component& c : analysis.components) {
    const std::size_t n = c.cycle.size();
    if (n % 2 == 0) continue;
    const bool first = is_square(graph, c.cycle.front());
    for (VertexId v : c.cycle) {
      if (is_square(graph, v) != first) {
        return failed(std::move(r), {{"cycle_length", n}, {"component", c.id}, {"vertex", fmt(graph, v)},
                                     {"reason", "odd cycle mixes square and non-square vertices"}});
      }
    }
    auto& slot = by_type[n];
    (first ? slot.first : slot.second)++;
  }
  json witness = json::object();
  for (const auto& [n, m] : census.cycle_lengths) {
    if (n % 2 == 0) continue;
    const auto [sq, nsq] = by_type[n];
    witness[std::to_string(n)] = {{"M_n", m}, {"square", sq}, {"non_square", nsq}};
    if (m % 2 != 0 || sq != nsq) return failed(std::move(r), {{"cycle_length", n}, {"counts", witness[std::to_string(n)]}});
  }
  r.witness = witness;
  return r;
}

CheckRecord check_cycle_lengths(const SwarmAnalysis& analysis) {
  auto r = record("cycle_length", "every directed cycle has more than two vertices");
  if (!analysis.structure_analyzed) return not_applicable(std::move(r), "cycles are not computed for q = 1 mod 8");
  std::size_t shortest = 0;
  for (const Component& c : analysis.components) {
    if (c.cycle.empty()) continue;
    if (c.cycle.size() < 3) return failed(std::move(r), {{"component", c.id}, {"cycle_length", c.cycle.size()}});
    shortest = shortest == 0 ? c.cycle.size() : std::min(shortest, c.cycle.size());
  }
  r.witness = {{"shortest", shortest}};
  return r;
}

namespace {

CheckRecord structure_record() {
  return record("structure", "component shape: one directed cycle with one feeder per cycle vertex "
                             "(q = 3 mod 4); a cycle c with leaves u, parents v, grandparents w and "
                             "grandparent leaves x (q = 5 mod 8); or a single vertex");
}

}  // namespace

CheckRecord check_structure(const SwarmGraph& graph, const Component& comp, ModClass mc) {
  auto r = structure_record();
  if (!structured(mc)) return not_applicable(std::move(r), "no structure result for q = 1 mod 8");
  if (comp.vertices.empty()) return failed(std::move(r), {{"component", comp.id}, {"reason", "empty component"}});
  json base = {{"component", comp.id}, {"first_vertex", fmt(graph, comp.vertices.front())}};
  auto fail = [&](std::string why, json extra = json::object()) {
    json w = base;
    w["reason"] = std::move(why);
    w.update(extra);
    return failed(r, std::move(w));
  };
  if (comp.structure_error) return fail(*comp.structure_error);
  if (comp.roles.size() != comp.vertices.size()) return fail("roles not assigned");

  if (comp.trivial()) {
    const VertexId v = comp.vertices.front();
    if (!graph.children(v).empty() || !graph.parents(v).empty()) return fail("single vertex with edges");
    if (comp.roles.front() != Role::isolated) return fail("single vertex not labelled isolated");
    r.witness = base;
    r.witness["shape"] = "isolated";
    return r;
  }

  const std::size_t n = comp.cycle.size();
  if (n < 3) return fail("cycle too short", {{"cycle_length", n}});
  for (std::size_t i = 0; i < n; ++i) {
    if (!graph.has_edge(comp.cycle[i], comp.cycle[(i + 1) % n])) {
      return fail("cycle is not closed", {{"vertex", fmt(graph, comp.cycle[i])}});
    }
  }

  struct Shape {
    std::size_t out_deg, in_deg, count_per_cycle_vertex;
  };
  std::map<Role, Shape> shapes;
  std::vector<std::pair<Role, Role>> allowed;
  if (mc == ModClass::three_mod_4) {
    shapes = {{Role::head, {1, 2, 1}}, {Role::tentacle, {1, 0, 1}}};
    allowed = {{Role::head, Role::head}, {Role::tentacle, Role::head}};
  } else {
    shapes = {{Role::cycle, {2, 2, 1}},          {Role::cycle_child_leaf, {0, 2, 1}}, {Role::cycle_parent, {2, 2, 1}},
              {Role::grandparent, {2, 0, 2}},    {Role::grandparent_leaf, {0, 2, 1}}};
    allowed = {{Role::cycle, Role::cycle},          {Role::cycle, Role::cycle_child_leaf},
               {Role::cycle_parent, Role::cycle},   {Role::cycle_parent, Role::cycle_child_leaf},
               {Role::grandparent, Role::cycle_parent}, {Role::grandparent, Role::grandparent_leaf}};
  }
  const Role cycle_role = mc == ModClass::three_mod_4 ? Role::head : Role::cycle;

  std::map<Role, std::size_t> counts;
  std::size_t edges = 0, cycle_edges = 0;
  for (std::size_t i = 0; i < comp.vertices.size(); ++i) {
    const VertexId v = comp.vertices[i];
    const Role role = comp.roles[i];
    const auto it = shapes.find(role);
    if (it == shapes.end()) return fail("unexpected role", {{"vertex", fmt(graph, v)}, {"role", to_string(role)}});
    if (graph.children(v).size() != it->second.out_deg || graph.parents(v).size() != it->second.in_deg) {
      return fail("degree mismatch", {{"vertex", fmt(graph, v)},
                                      {"role", to_string(role)},
                                      {"children", graph.children(v).size()},
                                      {"parents", graph.parents(v).size()}});
    }
    ++counts[role];
    const bool on_cycle = std::find(comp.cycle.begin(), comp.cycle.end(), v) != comp.cycle.end();
    if (on_cycle != (role == cycle_role)) return fail("cycle membership disagrees with role", {{"vertex", fmt(graph, v)}});
    for (VertexId w : graph.children(v)) {
      ++edges;
      const std::pair<Role, Role> kind{role, comp.role_of(w)};
      if (std::find(allowed.begin(), allowed.end(), kind) == allowed.end()) {
        return fail("edge between incompatible roles",
                    {{"edge", {fmt(graph, v), fmt(graph, w)}}, {"roles", {to_string(kind.first), to_string(kind.second)}}});
      }
      if (kind.first == cycle_role && kind.second == cycle_role) ++cycle_edges;
    }
  }
  if (cycle_edges != n) return fail("chord between cycle vertices", {{"cycle_edges", cycle_edges}});
  json role_counts = json::object();
  for (const auto& [role, shape] : shapes) {
    role_counts[std::string(to_string(role))] = counts[role];
    if (counts[role] != shape.count_per_cycle_vertex * n) return fail("role count mismatch", {{"roles", role_counts}});
  }
  // sizes: 2n and 2n edges (one undirected cycle) for 3 mod 4; 6n vertices and 8n edges for 5 mod 8
  const std::size_t want_vertices = mc == ModClass::three_mod_4 ? 2 * n : 6 * n;
  const std::size_t want_edges = mc == ModClass::three_mod_4 ? 2 * n : 8 * n;
  if (comp.vertices.size() != want_vertices || edges != want_edges) {
    return fail("size mismatch", {{"vertices", comp.vertices.size()}, {"edges", edges}, {"cycle_length", n}});
  }
  r.witness = base;
  r.witness["cycle_length"] = n;
  r.witness["roles"] = role_counts;
  return r;
}

CheckRecord check_structure(const SwarmGraph& graph, const SwarmAnalysis& analysis) {
  const ModClass mc = graph.ctx().mod_class();
  CheckRecord r = structure_record();
  if (!structured(mc)) return not_applicable(std::move(r), "no structure result for q = 1 mod 8");
  std::size_t trivial = 0, nontrivial = 0;
  for (const Component& c : analysis.components) {
    CheckRecord one = check_structure(graph, c, mc);
    if (one.status == CheckStatus::fail) return one;
    (c.trivial() ? trivial : nontrivial)++;
  }
  r.status = CheckStatus::pass;
  r.witness = {{"trivial_components", trivial}, {"nontrivial_components", nontrivial}};
  return r;
}

CheckRecord check_agm_steps(const SwarmGraph& graph, const SwarmAnalysis& analysis) {
  auto r = record("agm_step", "the AGM step follows the graph, and AGM sequences enter the cycle after at "
                              "most 1 step (q = 3 mod 4) or 2 steps (q = 5 mod 8)");
  const FieldCtx& ctx = graph.ctx();
  const ModClass mc = ctx.mod_class();
  if (!structured(mc)) return not_applicable(std::move(r), "no AGM sequence for q = 1 mod 8");
  if (analysis.structure_errors() != 0) return failed(std::move(r), {{"reason", "component structure is invalid"}});

  std::size_t steps = 0;
  for (const Component& comp : analysis.components) {
    const std::size_t n = comp.cycle.size();
    for (std::size_t i = 0; i < comp.vertices.size(); ++i) {
      const VertexId v = comp.vertices[i];
      const Role role = comp.roles[i];
      VertexId expected = kNoVertex;
      if (role == Role::head || role == Role::tentacle) {
        expected = graph.children(v)[0];
      } else if (role == Role::cycle) {
        const auto pos = std::find(comp.cycle.begin(), comp.cycle.end(), v) - comp.cycle.begin();
        expected = comp.cycle[(static_cast<std::size_t>(pos) + 1) % n];
      } else if (role == Role::cycle_parent || role == Role::grandparent) {
        const Role target = role == Role::cycle_parent ? Role::cycle : Role::cycle_parent;
        for (VertexId w : graph.children(v)) {
          if (comp.role_of(w) == target) expected = w;
        }
      }
      if (expected == kNoVertex) {
        try {
          agm_step_5mod8(ctx, graph.vertex(v));
          return failed(std::move(r), {{"vertex", fmt(graph, v)}, {"reason", "childless vertex produced a step"}});
        } catch (const SequenceError& e) {
          if (e.failure() != SequenceFailure::childless_start) throw;
        }
        continue;
      }
      const Vertex got = mc == ModClass::three_mod_4 ? agm_step_3mod4(ctx, graph.vertex(v)) : agm_step_5mod8(ctx, graph.vertex(v));
      ++steps;
      if (got != graph.vertex(expected)) {
        return failed(std::move(r), {{"vertex", fmt(graph, v)}, {"step", fmt(ctx, got)}, {"expected", fmt(graph, expected)}});
      }
    }

    if (n == 0) continue;
    // one full sequence per role that admits one
    std::map<Role, std::size_t> want_preperiod = mc == ModClass::three_mod_4
        ? std::map<Role, std::size_t>{{Role::head, 0}, {Role::tentacle, 1}}
        : std::map<Role, std::size_t>{{Role::cycle, 0}, {Role::cycle_parent, 1}, {Role::grandparent, 2}};
    for (std::size_t i = 0; i < comp.vertices.size() && !want_preperiod.empty(); ++i) {
      const auto it = want_preperiod.find(comp.roles[i]);
      if (it == want_preperiod.end()) continue;
      const AgmSequence seq = agm_sequence(ctx, graph.vertex(comp.vertices[i]));
      std::vector<VertexId> period;
      for (const Vertex& x : seq.period) period.push_back(graph.find(x).value_or(kNoVertex));
      const auto start = std::find(comp.cycle.begin(), comp.cycle.end(), period.empty() ? kNoVertex : period.front());
      bool ok = seq.preperiod.size() == it->second && period.size() == n && start != comp.cycle.end();
      if (ok) {
        const std::size_t offset = static_cast<std::size_t>(start - comp.cycle.begin());
        for (std::size_t j = 0; j < n; ++j) ok = ok && period[j] == comp.cycle[(offset + j) % n];
      }
      if (!ok) {
        return failed(std::move(r), {{"start", fmt(graph, comp.vertices[i])},
                                     {"preperiod", seq.preperiod.size()},
                                     {"period", seq.period.size()},
                                     {"cycle_length", n}});
      }
      want_preperiod.erase(it);
    }
  }
  r.witness = {{"steps_checked", steps}};
  return r;
}

CheckRecord check_nontrivial_exists(const SwarmGraph& graph, const SwarmAnalysis& analysis) {
  auto r = record("nontrivial_exists", "for q = 5 mod 8 there are edges iff q >= 29");
  const FieldCtx& ctx = graph.ctx();
  if (ctx.mod_class() != ModClass::five_mod_8) return not_applicable(std::move(r), "only stated for q = 5 mod 8");
  const std::size_t nontrivial = static_cast<std::size_t>(std::count_if(
      analysis.components.begin(), analysis.components.end(), [](const Component& c) { return !c.trivial(); }));
  r.witness = {{"edges", graph.edge_count()}, {"nontrivial_components", nontrivial}};
  const bool expect_edges = ctx.order() >= 29;
  if (expect_edges != (graph.edge_count() > 0)) r.status = CheckStatus::fail;
  return r;
}

Vertex find_parented_vertex_constructive(const FieldCtx& ctx) {
  require_five_mod_8_from_29(ctx);
  const FieldElement g = ctx.primitive_element();
  const FieldElement one = ctx.one();
  for (unsigned e : {2u, 4u, 6u}) {
    const Vertex v = make_vertex(ctx, ctx.pow(g, e), one);
    if (!parents(ctx, v).empty()) return v;
  }
  // g^4+1 and g^8+g^4+1 are then both squares: with a^2 = g^4+1, b^2 = g^8+g^4+1
  // we get a^4 - g^4 = b^2, so (a^2, g^2) has parents.
  const FieldElement g2 = ctx.pow(g, 2), g4 = ctx.pow(g, 4), g8 = ctx.pow(g, 8);
  const auto a = ctx.sqrt(ctx.add(g4, one));
  const auto b = ctx.sqrt(ctx.add(ctx.add(g8, g4), one));
  if (!a || !b) throw StructureViolation("g^4+1 or g^8+g^4+1 is not a square");
  const Vertex v = make_vertex(ctx, ctx.mul(a->low, a->low), g2);
  if (parents(ctx, v).empty()) throw StructureViolation("constructed vertex " + fmt(ctx, v) + " has no parents");
  return v;
}

std::optional<Edge> search_fourth_power_edge(const FieldCtx& ctx) {
  const std::uint32_t q = ctx.order();
  const FieldElement g = ctx.primitive_element();
  const FieldElement g2 = ctx.mul(g, g);
  const FieldElement target = ctx.add(g2, g2);
  std::vector<std::uint32_t> fourth_root(q, 0);
  for (std::uint32_t y = q; y-- > 1;) fourth_root[ctx.pow({y}, 4).index] = y;
  for (std::uint32_t xi = 1; xi < q; ++xi) {
    const FieldElement x{xi};
    const FieldElement x4 = ctx.pow(x, 4);
    const FieldElement rest = ctx.sub(target, x4);
    if (rest.index == 0 || fourth_root[rest.index] == 0) continue;
    const FieldElement y{fourth_root[rest.index]};
    if (y == x || y == ctx.neg(x)) continue;
    const FieldElement xy = ctx.mul(x, y);
    const Edge e{{x4, rest}, {g2, ctx.mul(xy, xy)}};
    if (!is_vertex(ctx, e.from.a, e.from.b) || !is_vertex(ctx, e.to.a, e.to.b)) continue;
    if (!children(ctx, e.from).contains(e.to)) throw StructureViolation("fourth-power pair does not give an edge");
    return e;
  }
  return std::nullopt;
}

std::optional<Vertex> listed_square_cycle_vertex(const FieldCtx& ctx) {
  if (!ctx.is_prime_field()) return std::nullopt;
  switch (ctx.order()) {
    case 29: return Vertex{{9}, {6}};
    case 37: return Vertex{{27}, {4}};
    case 53: return Vertex{{25}, {7}};
    case 61: return Vertex{{1}, {9}};
    default: return std::nullopt;
  }
}

Edge find_square_edge_constructive(const FieldCtx& ctx) {
  require_five_mod_8_from_29(ctx);
  Edge e;
  if (ctx.order() > 81) {
    const auto found = search_fourth_power_edge(ctx);
    if (!found) throw StructureViolation("no solution of x^4 + y^4 = 2g^2 gives an edge");
    e = *found;
  } else {
    const auto listed = listed_square_cycle_vertex(ctx);
    if (!listed) throw std::invalid_argument("no listed square cycle vertex for this field");
    e = {*listed, agm_step_5mod8(ctx, *listed)};
  }
  if (!is_square_vertex(ctx, e.from) || !is_square_vertex(ctx, e.to)) {
    throw StructureViolation("constructed edge " + fmt(ctx, e.from) + " -> " + fmt(ctx, e.to) + " is not between squares");
  }
  return e;
}

CheckRecord check_parented_vertex(const SwarmGraph& graph) {
  auto r = record("parented_vertex_constructive", "a vertex with parents exists for q = 5 mod 8, q >= 29, "
                                                  "constructed from a generator");
  const FieldCtx& ctx = graph.ctx();
  if (ctx.mod_class() != ModClass::five_mod_8 || ctx.order() < 29) {
    return not_applicable(std::move(r), "only stated for q = 5 mod 8, q >= 29");
  }
  Vertex v;
  try {
    v = find_parented_vertex_constructive(ctx);
  } catch (const std::exception& e) {
    return failed(std::move(r), {{"reason", e.what()}});
  }
  const auto id = graph.find(v);
  r.witness = {{"vertex", fmt(ctx, v)}};
  if (!id || graph.parents(*id).empty()) {
    r.status = CheckStatus::fail;
    r.witness["reason"] = "witness is missing from the graph or has no parents there";
  }
  return r;
}

CheckRecord check_square_component(const SwarmGraph& graph, const SwarmAnalysis& analysis) {
  auto r = record("square_component", "for q = 5 mod 8, q >= 29, some nontrivial component consists of square "
                                      "vertices (via x^4 + y^4 = 2g^2, or the known cycle vertex below 81)");
  const FieldCtx& ctx = graph.ctx();
  if (ctx.mod_class() != ModClass::five_mod_8 || ctx.order() < 29) {
    return not_applicable(std::move(r), "only stated for q = 5 mod 8, q >= 29");
  }
  auto square_component_of = [&](const Vertex& v) -> std::optional<std::size_t> {
    const auto id = graph.find(v);
    if (!id) return std::nullopt;
    const Component& c = analysis.components[analysis.component_of[*id]];
    if (c.trivial() || alternation_class(graph, c) != "all-square") return std::nullopt;
    return c.id;
  };

  Edge e;
  try {
    e = find_square_edge_constructive(ctx);
  } catch (const std::exception& ex) {
    return failed(std::move(r), {{"reason", ex.what()}});
  }
  r.witness = {{"edge", {fmt(ctx, e.from), fmt(ctx, e.to)}}};
  const auto from = graph.find(e.from), to = graph.find(e.to);
  if (!from || !to || !graph.has_edge(*from, *to)) {
    const json edge = r.witness["edge"];
    return failed(std::move(r), {{"edge", edge}, {"reason", "edge missing from the graph"}});
  }
  const auto comp = square_component_of(e.from);
  if (!comp) {
    const json edge = r.witness["edge"];
    return failed(std::move(r), {{"edge", edge}, {"reason", "component is not all-square"}});
  }
  r.witness["component"] = *comp;

  if (const auto listed = listed_square_cycle_vertex(ctx)) {
    const auto id = graph.find(*listed);
    const bool on_cycle = id && analysis.components[analysis.component_of[*id]].role_of(*id) == Role::cycle;
    r.witness["listed_vertex"] = fmt(ctx, *listed);
    if (!on_cycle) return failed(std::move(r), {{"listed_vertex", fmt(ctx, *listed)}, {"reason", "not on a cycle"}});
    // the search may or may not succeed below 81; when it does it must agree
    if (const auto searched = search_fourth_power_edge(ctx)) {
      r.witness["search_edge"] = {fmt(ctx, searched->from), fmt(ctx, searched->to)};
      if (!square_component_of(searched->from)) {
        const json edge = r.witness["search_edge"];
        return failed(std::move(r), {{"search_edge", edge}, {"reason", "component is not all-square"}});
      }
    }
  }
  return r;
}

VerificationReport verify(const SwarmGraph& graph, const SwarmAnalysis& analysis) {
  const FieldCtx& ctx = graph.ctx();
  VerificationReport report;
  report.q = ctx.order();
  report.p = ctx.characteristic();
  report.k = ctx.degree();
  report.mod_class = ctx.mod_class();
  const CycleCensus cen = census(graph, analysis);
  report.checks.push_back(check_vertex_count(graph));
  report.checks.push_back(check_child_counts(graph));
  report.checks.push_back(check_parent_lemma(graph));
  report.checks.push_back(check_automorphisms(graph));
  report.checks.push_back(check_two_step_square(graph));
  report.checks.push_back(check_alternation(graph, analysis));
  report.checks.push_back(check_divisibility(graph, analysis, cen));
  report.checks.push_back(check_odd_cycle_parity(graph, analysis, cen));
  report.checks.push_back(check_cycle_lengths(analysis));
  report.checks.push_back(check_structure(graph, analysis));
  report.checks.push_back(check_agm_steps(graph, analysis));
  report.checks.push_back(check_nontrivial_exists(graph, analysis));
  report.checks.push_back(check_parented_vertex(graph));
  report.checks.push_back(check_square_component(graph, analysis));
  return report;
}

}  // namespace agm
