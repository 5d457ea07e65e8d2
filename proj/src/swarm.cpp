#include "agm/swarm.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace agm {

namespace {

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(begin, end) over [0, n) split into contiguous chunks.
template <typename Body>
void parallel_ranges(std::size_t n, unsigned threads, Body&& body) {
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = std::min(n, t * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

std::size_t local_index(const Component& comp, VertexId v) {
  const auto it = std::lower_bound(comp.vertices.begin(), comp.vertices.end(), v);
  if (it == comp.vertices.end() || *it != v) return comp.vertices.size();
  return static_cast<std::size_t>(it - comp.vertices.begin());
}

std::string describe(const SwarmGraph& g, VertexId v) { return format_vertex(g.ctx(), g.vertex(v)); }

}  // namespace

DisjointSet::DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSet::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSet::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (size_[x] < size_[y]) std::swap(x, y);
  parent_[y] = x;
  size_[x] += size_[y];
  return true;
}

std::uint64_t expected_vertex_count(std::uint64_t q) {
  if (q % 4 == 3) return (q - 1) * (q - 3) / 2;
  return (q - 1) * (q - 5) / 2;
}

SwarmGraph SwarmGraph::build(FieldCtx ctx, const BuildOptions& options) {
  if (ctx.order() > options.max_q) {
    throw GraphBoundError("q = " + std::to_string(ctx.order()) + " exceeds the graph bound " +
                          std::to_string(options.max_q));
  }
  SwarmGraph g;
  g.ctx_ = std::make_shared<const FieldCtx>(std::move(ctx));
  const FieldCtx& f = *g.ctx_;
  const std::uint32_t q = f.order();
  const unsigned threads = resolve_threads(options.threads);

  // Rows keyed by the index of a; each row lists the admissible b in order.
  std::vector<std::vector<FieldElement>> rows(q);
  parallel_ranges(q, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t ai = std::max<std::size_t>(lo, 1); ai < hi; ++ai) {
      const FieldElement a{static_cast<std::uint32_t>(ai)};
      for (std::uint32_t bi = 1; bi < q; ++bi) {
        if (is_vertex(f, a, {bi})) rows[ai].push_back({bi});
      }
    }
  });
  g.row_start_.assign(std::size_t{q} + 1, 0);
  for (std::uint32_t ai = 0; ai < q; ++ai) {
    g.row_start_[ai + 1] = g.row_start_[ai] + static_cast<std::uint32_t>(rows[ai].size());
  }
  g.vertices_.reserve(g.row_start_[q]);
  for (std::uint32_t ai = 0; ai < q; ++ai) {
    for (FieldElement b : rows[ai]) g.vertices_.push_back({{ai}, b});
    std::vector<FieldElement>().swap(rows[ai]);
  }

  const std::size_t n = g.vertices_.size();
  g.child_.assign(n, {kNoVertex, kNoVertex});
  g.child_count_.assign(n, 0);
  parallel_ranges(n, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t id = lo; id < hi; ++id) {
      const Neighbors kids = agm::children(f, g.vertices_[id]);
      for (const Vertex& w : kids) g.child_[id][g.child_count_[id]++] = *g.find(w);
    }
  });

  g.parent_.assign(n, {kNoVertex, kNoVertex});
  g.parent_count_.assign(n, 0);
  for (VertexId id = 0; id < n; ++id) {
    for (VertexId w : g.children(id)) {
      if (g.parent_count_[w] == 2) throw StructureViolation("vertex " + describe(g, w) + " has more than two parents");
      g.parent_[w][g.parent_count_[w]++] = id;
      ++g.edge_count_;
    }
  }

  if (f.mod_class() == ModClass::one_mod_8) {
    g.warnings_.push_back("q = " + std::to_string(q) +
                          " is 1 mod 8: the graph is built but counts and structure are not asserted");
  } else if (n != expected_vertex_count(q)) {
    g.warnings_.push_back("vertex count " + std::to_string(n) + " differs from the closed form " +
                          std::to_string(expected_vertex_count(q)));
  }
  return g;
}

std::optional<VertexId> SwarmGraph::find(const Vertex& v) const {
  if (v.a.index >= ctx_->order()) return std::nullopt;
  const auto first = vertices_.begin() + row_start_[v.a.index];
  const auto last = vertices_.begin() + row_start_[v.a.index + 1];
  const auto it = std::lower_bound(first, last, v);
  if (it == last || *it != v) return std::nullopt;
  return static_cast<VertexId>(it - vertices_.begin());
}

bool SwarmGraph::has_edge(VertexId from, VertexId to) const {
  const auto kids = children(from);
  return std::find(kids.begin(), kids.end(), to) != kids.end();
}

void SwarmGraph::remove_edge(VertexId from, VertexId to) {
  auto drop = [](std::array<VertexId, 2>& slots, std::uint8_t& count, VertexId x) {
    for (std::uint8_t i = 0; i < count; ++i) {
      if (slots[i] == x) {
        slots[i] = slots[count - 1];
        slots[count - 1] = kNoVertex;
        --count;
        return true;
      }
    }
    return false;
  };
  if (!drop(child_[from], child_count_[from], to)) throw std::invalid_argument("no such edge");
  drop(parent_[to], parent_count_[to], from);
  --edge_count_;
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::unassigned: return "unassigned";
    case Role::cycle: return "cycle";
    case Role::cycle_child_leaf: return "cycle-child-leaf";
    case Role::cycle_parent: return "cycle-parent";
    case Role::grandparent: return "grandparent";
    case Role::grandparent_leaf: return "grandparent-leaf";
    case Role::head: return "head";
    case Role::tentacle: return "tentacle";
    case Role::isolated: return "isolated";
  }
  return "?";
}

bool Component::contains(VertexId v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

Role Component::role_of(VertexId v) const {
  const std::size_t i = local_index(*this, v);
  if (i == vertices.size() || roles.size() != vertices.size()) return Role::unassigned;
  return roles[i];
}

std::vector<Component> components(const SwarmGraph& graph) {
  const std::size_t n = graph.vertex_count();
  DisjointSet dsu(n);
  for (VertexId id = 0; id < n; ++id) {
    for (VertexId w : graph.children(id)) dsu.unite(id, w);
  }
  std::vector<Component> out;
  std::vector<std::size_t> slot(n, SIZE_MAX);
  for (VertexId id = 0; id < n; ++id) {
    const std::size_t root = dsu.find(id);
    if (slot[root] == SIZE_MAX) {
      slot[root] = out.size();
      out.emplace_back().id = slot[root];
    }
    out[slot[root]].vertices.push_back(id);
  }
  return out;
}

std::vector<VertexId> find_cycle(const SwarmGraph& graph, const Component& comp) {
  const std::size_t n = comp.vertices.size();
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<int> out_deg(n), in_deg(n);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    out_deg[i] = static_cast<int>(graph.children(comp.vertices[i]).size());
    in_deg[i] = static_cast<int>(graph.parents(comp.vertices[i]).size());
    if (out_deg[i] == 0 || in_deg[i] == 0) queue.push_back(i);
  }
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    if (!alive[i]) continue;
    alive[i] = 0;
    const VertexId v = comp.vertices[i];
    for (VertexId w : graph.children(v)) {
      const std::size_t j = local_index(comp, w);
      if (j < n && alive[j] && --in_deg[j] == 0) queue.push_back(j);
    }
    for (VertexId u : graph.parents(v)) {
      const std::size_t j = local_index(comp, u);
      if (j < n && alive[j] && --out_deg[j] == 0) queue.push_back(j);
    }
  }

  std::size_t remaining = 0, start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    ++remaining;
    if (start == n) start = i;
    if (out_deg[i] != 1 || in_deg[i] != 1) {
      throw StructureViolation("component " + std::to_string(comp.id) + ": vertex " +
                               describe(graph, comp.vertices[i]) + " survives peeling with " +
                               std::to_string(out_deg[i]) + " children and " + std::to_string(in_deg[i]) +
                               " parents on cycles");
    }
  }
  if (remaining == 0) return {};

  std::vector<VertexId> cycle;
  std::size_t cur = start;
  do {
    cycle.push_back(comp.vertices[cur]);
    std::size_t next = n;
    for (VertexId w : graph.children(comp.vertices[cur])) {
      const std::size_t j = local_index(comp, w);
      if (j < n && alive[j]) next = j;
    }
    cur = next;
  } while (cur != start && cycle.size() <= remaining);
  if (cycle.size() != remaining) {
    throw StructureViolation("component " + std::to_string(comp.id) + " contains " + std::to_string(remaining) +
                             " cycle vertices but the cycle through " + describe(graph, comp.vertices[start]) +
                             " has length " + std::to_string(cycle.size()));
  }
  return cycle;
}

std::vector<Role> assign_roles(const SwarmGraph& graph, const Component& comp, ModClass mc) {
  const std::size_t n = comp.vertices.size();
  std::vector<Role> roles(n, Role::unassigned);
  auto fail = [&](const std::string& what) {
    throw StructureViolation("component " + std::to_string(comp.id) + ": " + what);
  };
  auto label = [&](VertexId v, Role r) {
    const std::size_t i = local_index(comp, v);
    if (i == n) fail("vertex " + describe(graph, v) + " lies outside the component");
    if (roles[i] != Role::unassigned && roles[i] != r) {
      fail("vertex " + describe(graph, v) + " is both " + std::string(to_string(roles[i])) + " and " +
           std::string(to_string(r)));
    }
    roles[i] = r;
  };

  if (comp.trivial() && graph.children(comp.vertices[0]).empty() && graph.parents(comp.vertices[0]).empty()) {
    roles[0] = Role::isolated;
    return roles;
  }
  if (comp.cycle.empty()) fail("nontrivial component without a directed cycle");
  const std::size_t len = comp.cycle.size();
  std::vector<VertexId> sorted_cycle = comp.cycle;
  std::sort(sorted_cycle.begin(), sorted_cycle.end());
  auto on_cycle = [&](VertexId v) { return std::binary_search(sorted_cycle.begin(), sorted_cycle.end(), v); };

  if (mc == ModClass::three_mod_4) {
    for (VertexId c : comp.cycle) label(c, Role::head);
    for (std::size_t i = 0; i < n; ++i) {
      const VertexId v = comp.vertices[i];
      if (roles[i] == Role::unassigned) roles[i] = Role::tentacle;
      if (graph.children(v).size() != 1) fail("vertex " + describe(graph, v) + " does not have exactly one child");
      if (roles[i] == Role::tentacle) {
        if (!graph.parents(v).empty()) fail("tentacle " + describe(graph, v) + " has parents");
        if (!on_cycle(graph.children(v)[0])) fail("tentacle " + describe(graph, v) + " does not feed the head");
      }
    }
    if (n != 2 * len) {
      fail("component has " + std::to_string(n) + " vertices for a head of length " + std::to_string(len));
    }
    return roles;
  }

  if (mc != ModClass::five_mod_8) fail("roles are only defined for q = 3 mod 4 and q = 5 mod 8");
  if (len < 3) fail("cycle of length " + std::to_string(len) + " (expected more than two)");

  for (VertexId c : comp.cycle) label(c, Role::cycle);
  std::vector<VertexId> cycle_parents;
  for (VertexId c : comp.cycle) {
    const auto kids = graph.children(c);
    const auto pars = graph.parents(c);
    if (kids.size() != 2 || pars.size() != 2) {
      fail("cycle vertex " + describe(graph, c) + " has " + std::to_string(kids.size()) + " children and " +
           std::to_string(pars.size()) + " parents");
    }
    if (on_cycle(kids[0]) == on_cycle(kids[1])) fail("cycle vertex " + describe(graph, c) + " needs one child off the cycle");
    if (on_cycle(pars[0]) == on_cycle(pars[1])) fail("cycle vertex " + describe(graph, c) + " needs one parent off the cycle");
    label(on_cycle(kids[0]) ? kids[1] : kids[0], Role::cycle_child_leaf);
    const VertexId v = on_cycle(pars[0]) ? pars[1] : pars[0];
    label(v, Role::cycle_parent);
    cycle_parents.push_back(v);
  }
  for (VertexId v : cycle_parents) {
    for (VertexId w : graph.parents(v)) label(w, Role::grandparent);
  }
  for (VertexId v : cycle_parents) {
    for (VertexId w : graph.parents(v)) {
      for (VertexId x : graph.children(w)) {
        if (x != v) label(x, Role::grandparent_leaf);
      }
    }
  }

  std::size_t counts[9] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const VertexId v = comp.vertices[i];
    ++counts[static_cast<int>(roles[i])];
    switch (roles[i]) {
      case Role::unassigned: fail("vertex " + describe(graph, v) + " has no role");
        break;
      case Role::cycle_child_leaf:
      case Role::grandparent_leaf:
        if (!graph.children(v).empty()) fail("leaf " + describe(graph, v) + " has children");
        break;
      case Role::grandparent:
        if (!graph.parents(v).empty()) fail("grandparent " + describe(graph, v) + " has parents");
        break;
      default: break;
    }
  }
  if (counts[static_cast<int>(Role::cycle_child_leaf)] != len || counts[static_cast<int>(Role::cycle_parent)] != len ||
      counts[static_cast<int>(Role::grandparent)] != 2 * len || counts[static_cast<int>(Role::grandparent_leaf)] != len) {
    fail("role counts do not match a cycle of length " + std::to_string(len));
  }
  return roles;
}

std::size_t SwarmAnalysis::structure_errors() const {
  return static_cast<std::size_t>(
      std::count_if(components.begin(), components.end(), [](const Component& c) { return c.structure_error.has_value(); }));
}

SwarmAnalysis analyze(const SwarmGraph& graph) {
  SwarmAnalysis out;
  out.components = components(graph);
  out.component_of.assign(graph.vertex_count(), 0);
  for (const Component& c : out.components) {
    for (VertexId v : c.vertices) out.component_of[v] = static_cast<std::uint32_t>(c.id);
  }
  const ModClass mc = graph.ctx().mod_class();
  out.structure_analyzed = mc != ModClass::one_mod_8;
  if (!out.structure_analyzed) return out;
  for (Component& c : out.components) {
    try {
      c.cycle = find_cycle(graph, c);
      c.roles = assign_roles(graph, c, mc);
    } catch (const StructureViolation& e) {
      c.roles.assign(c.vertices.size(), Role::unassigned);
      c.structure_error = e.what();
    }
  }
  return out;
}

CycleCensus census(const SwarmGraph& graph, const SwarmAnalysis& analysis) {
  CycleCensus out;
  out.q = graph.ctx().order();
  out.vertex_count = graph.vertex_count();
  out.edge_count = graph.edge_count();
  out.components_total = analysis.components.size();
  for (const Component& c : analysis.components) {
    ++out.component_sizes[c.vertices.size()];
    if (c.trivial()) {
      ++out.components_trivial;
    } else {
      ++out.components_nontrivial;
    }
    if (!c.cycle.empty()) ++out.cycle_lengths[c.cycle.size()];
  }
  return out;
}

std::string format_histogram(const std::map<std::size_t, std::size_t>& histogram) {
  std::string out;
  for (const auto& [n, m] : histogram) {
    if (!out.empty()) out += ';';
    out += std::to_string(n) + ":" + std::to_string(m);
  }
  return out;
}

}  // namespace agm
