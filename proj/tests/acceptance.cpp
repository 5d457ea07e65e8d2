// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "agm/sweep.hpp"
#include "agm/verify.hpp"
#include "cli.hpp"

using namespace agm;
using Clock = std::chrono::steady_clock;

namespace {

// Time limits, in seconds.
constexpr double kSmallFieldLimit = 1.0;
constexpr double kSweepLimit = 300.0;
constexpr double kExtensionLimit = 30.0;

constexpr std::uint64_t kSweepEnd = 1000;  // exclusive
constexpr std::uint64_t kExhaustiveEnd = 169;
constexpr std::uint64_t kDeterminismEnd = 128;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Built {
  SwarmGraph graph;
  SwarmAnalysis analysis;
  CycleCensus census;
};

Built build(std::uint64_t q) {
  SwarmGraph g = SwarmGraph::build(FieldCtx::from_order(q), {.threads = 1});
  SwarmAnalysis a = analyze(g);
  CycleCensus c = census(g, a);
  return {std::move(g), std::move(a), std::move(c)};
}

std::string cli(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  if (code) *code = rc;
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool check_passes(const VerificationReport& r, const char* name) {
  const CheckRecord* c = r.find(name);
  return c && c->status == CheckStatus::pass;
}

std::string q_str(std::uint64_t q) { return "q=" + std::to_string(q); }

Outcome criterion_f11() {
  Outcome o;
  const auto t0 = Clock::now();
  const Built b = build(11);
  o.require(b.graph.vertex_count() == 40, "vertex count " + std::to_string(b.graph.vertex_count()));
  o.require(b.analysis.components.size() == 3, "component count " + std::to_string(b.analysis.components.size()));
  std::multiset<std::size_t> lengths;
  for (const Component& c : b.analysis.components)
    if (!c.cycle.empty()) lengths.insert(c.cycle.size());
  std::string got;
  for (std::size_t n : lengths) got += (got.empty() ? "" : ",") + std::to_string(n);
  o.require(lengths == std::multiset<std::size_t>{10, 10, 5}, "cycle lengths {" + got + "}, expected {10,10,5}");
  const std::string ten = cli({"sequence", "11", "4", "1"});
  o.require(ten.find(": | period: (4,1), (8,2), (5,4), (10,8), (9,5), (7,10), (3,9), (6,7), (1,3), (2,6) |") !=
                std::string::npos,
            "sequence 11 4 1 printed: " + ten.substr(0, ten.find('\n')));
  const std::string five = cli({"sequence", "11", "9", "1"});
  o.require(five.find(": | period: (9,1), (5,3), (4,9), (1,5), (3,4) |") != std::string::npos,
            "sequence 11 9 1 printed: " + five.substr(0, five.find('\n')));
  const double s = seconds_since(t0);
  o.require(s < kSmallFieldLimit, "took " + std::to_string(s) + " s");
  return o;
}

Outcome criterion_f13() {
  Outcome o;
  const auto t0 = Clock::now();
  const Built b = build(13);
  o.require(b.graph.vertex_count() == 48, "vertex count " + std::to_string(b.graph.vertex_count()));
  o.require(b.graph.edge_count() == 0, "edge count " + std::to_string(b.graph.edge_count()));
  const double s = seconds_since(t0);
  o.require(s < kSmallFieldLimit, "took " + std::to_string(s) + " s");
  return o;
}

Outcome criterion_f5() {
  Outcome o;
  const Built b = build(5);
  o.require(b.graph.vertex_count() == 0, "vertex count " + std::to_string(b.graph.vertex_count()));
  return o;
}

Outcome criterion_f29() {
  Outcome o;
  const auto t0 = Clock::now();
  const Built b = build(29);
  o.require(b.graph.vertex_count() == 336, "vertex count " + std::to_string(b.graph.vertex_count()));
  o.require(b.census.cycle_lengths == std::map<std::size_t, std::size_t>{{28, 1}, {7, 4}},
            "histogram " + format_histogram(b.census.cycle_lengths));
  for (const Component& c : b.analysis.components) {
    if (c.trivial()) continue;
    o.require(check_structure(b.graph, c, ModClass::five_mod_8).status == CheckStatus::pass,
              "component " + std::to_string(c.id) + " fails the structure check");
    o.require(c.vertices.size() == 6 * c.cycle.size(), "component " + std::to_string(c.id) + " has " +
                                                           std::to_string(c.vertices.size()) + " vertices");
  }
  const double s = seconds_since(t0);
  o.require(s < kSmallFieldLimit, "took " + std::to_string(s) + " s");
  return o;
}

bool in_sweep(std::uint64_t q) {
  const ModClass mc = mod_class_of(q);
  return (mc == ModClass::three_mod_4 && q >= 7) || (mc == ModClass::five_mod_8 && q >= 29);
}

// Criteria 5-8 evaluated on one field.
struct FieldVerdict {
  bool vertex_count = true;
  bool divisibility = true;
  bool structural = true;
  bool nontrivial = true;
  std::string why5, why6, why7, why8;
};

FieldVerdict judge(std::uint64_t q, bool exhaustive) {
  FieldVerdict v;
  const Built b = build(q);
  const ModClass mc = mod_class_of(q);
  const FieldCtx& f = b.graph.ctx();
  const std::string tag = q_str(q) + ": ";

  if (b.graph.vertex_count() != expected_vertex_count(q)) {
    v.vertex_count = false;
    v.why5 = tag + std::to_string(b.graph.vertex_count()) + " vertices";
  }

  const VerificationReport report = verify(b.graph, b.analysis);
  if (!check_passes(report, "orbit_divisibility")) {
    v.divisibility = false;
    v.why6 = tag + "orbit partition check failed";
  }
  for (const auto& [n, m] : b.census.cycle_lengths) {
    if ((n * m) % (q - 1) != 0) {
      v.divisibility = false;
      v.why6 = tag + "q-1 does not divide " + std::to_string(n) + "*" + std::to_string(m);
    }
    if (n % 2 == 1 && m % 2 == 1) {
      v.divisibility = false;
      v.why6 = tag + "M_" + std::to_string(n) + " = " + std::to_string(m) + " is odd";
    }
  }

  if (exhaustive) {
    auto fail7 = [&](const std::string& why) {
      if (v.structural) v.why7 = tag + why;
      v.structural = false;
    };
    for (const char* name : {"child_count", "parent_lemma", "two_step_square", "alternation", "cycle_length"})
      if (!check_passes(report, name)) fail7(std::string(name) + " check failed");
    for (VertexId id = 0; id < b.graph.vertex_count(); ++id) {
      const Vertex& x = b.graph.vertex(id);
      const auto kids = b.graph.children(id);
      if (mc == ModClass::three_mod_4 && kids.size() != 1) fail7("vertex without exactly one child");
      if (mc == ModClass::five_mod_8 && kids.size() == 1) fail7("vertex with exactly one child");
      for (VertexId c : kids) {
        const auto ps = b.graph.parents(c);
        if (std::find(ps.begin(), ps.end(), id) == ps.end()) fail7("child does not list its parent");
      }
      const FieldElement disc = f.sub(f.mul(x.a, x.a), f.mul(x.b, x.b));
      const bool has_parents = !b.graph.parents(id).empty();
      if (has_parents != (f.quadratic_character(disc) == 1)) fail7("parents do not follow the character of a^2-b^2");
      for (VertexId m : kids)
        for (VertexId w : b.graph.children(m))
          if (is_square_vertex(f, x) != is_square_vertex(f, b.graph.vertex(w))) fail7("two-step square lemma");
    }
    for (const Component& c : b.analysis.components) {
      if (c.trivial()) continue;
      if (alternation_class(b.graph, c) == "mixed") fail7("mixed component");
      if (mc == ModClass::five_mod_8 && c.cycle.size() < 3) fail7("cycle shorter than 3");
      const std::set<VertexId> on_cycle(c.cycle.begin(), c.cycle.end());
      for (VertexId x : c.cycle) {
        const auto ps = b.graph.parents(x);
        if (ps.size() != 2) fail7("cycle vertex without two parents");
        std::size_t inside = 0;
        for (VertexId p : ps) inside += on_cycle.count(p);
        if (inside != 1) fail7("cycle vertex with " + std::to_string(inside) + " parents on the cycle");
      }
    }
  }

  if (mc == ModClass::five_mod_8) {
    bool nontrivial = false, all_square = false;
    for (const Component& c : b.analysis.components) {
      if (c.trivial()) continue;
      nontrivial = true;
      all_square |= alternation_class(b.graph, c) == "all-square";
    }
    if (!nontrivial || !all_square) {
      v.nontrivial = false;
      v.why8 = tag + (nontrivial ? "no all-square nontrivial component" : "no nontrivial component");
    }
    if (const auto listed = listed_square_cycle_vertex(f)) {
      const auto id = b.graph.find(*listed);
      const bool ok = id && b.analysis.components[b.analysis.component_of[*id]].role_of(*id) == Role::cycle &&
                      alternation_class(b.graph, b.analysis.components[b.analysis.component_of[*id]]) == "all-square";
      if (!ok) {
        v.nontrivial = false;
        v.why8 = tag + format_vertex(f, *listed) + " is not a cycle vertex of an all-square component";
      }
    }
  }
  return v;
}

struct SweepOutcome {
  Outcome c5, c6, c7, c8;
};

SweepOutcome criteria_sweep() {
  SweepOutcome s;
  const auto t0 = Clock::now();
  std::size_t fields = 0, listed = 0;
  for (std::uint64_t q : sweep_orders(7, kSweepEnd - 1, {ModClass::three_mod_4, ModClass::five_mod_8}, false)) {
    if (!in_sweep(q)) continue;
    ++fields;
    listed += q == 29 || q == 37 || q == 53 || q == 61;
    const FieldVerdict v = judge(q, q <= kExhaustiveEnd);
    s.c5.require(v.vertex_count, v.why5);
    s.c6.require(v.divisibility, v.why6);
    s.c7.require(v.structural, v.why7);
    s.c8.require(v.nontrivial, v.why8);
  }
  // q = 13 belongs to the exhaustive range even though the sweep starts at 29 for 5 mod 8
  const FieldVerdict v13 = judge(13, true);
  s.c7.require(v13.structural, v13.why7);
  for (std::uint64_t q : {5, 13}) s.c8.require(build(q).graph.edge_count() == 0, q_str(q) + " has edges");
  s.c8.require(listed == 4, "listed fields missing from the sweep");

  const double secs = seconds_since(t0);
  s.c5.require(secs < kSweepLimit, "sweep took " + std::to_string(secs) + " s");
  const std::string summary = std::to_string(fields) + " fields in " + std::to_string(static_cast<int>(secs)) + " s";
  for (Outcome* o : {&s.c5, &s.c6, &s.c7, &s.c8})
    if (o->pass) o->detail = summary;
  return s;
}

Outcome criterion_extension() {
  Outcome o;
  const auto t0 = Clock::now();
  const Built b = build(125);
  o.require(b.graph.ctx().degree() == 3, "125 is not built as 5^3");
  const VerificationReport r = verify(b.graph, b.analysis);
  for (const CheckRecord& c : r.checks)
    o.require(c.status != CheckStatus::fail, "check " + c.name + " failed: " + c.witness.dump());
  const FieldVerdict v = judge(125, true);
  o.require(v.vertex_count, v.why5);
  o.require(v.divisibility, v.why6);
  o.require(v.structural, v.why7);
  o.require(v.nontrivial, v.why8);
  const double s = seconds_since(t0);
  o.require(s < kExtensionLimit, "took " + std::to_string(s) + " s");
  if (o.pass) o.detail = format_histogram(b.census.cycle_lengths) + " in " + std::to_string(s) + " s";
  return o;
}

Outcome criterion_determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "agm_acceptance";
  std::filesystem::create_directories(dir);
  std::vector<std::uint64_t> orders;
  for (std::uint64_t q = 3; q <= kDeterminismEnd; q += 2)
    if (prime_power_decomposition(q)) orders.push_back(q);
  for (std::uint64_t q : orders) {
    const std::string qs = std::to_string(q);
    for (const char* cmd : {"build", "verify"}) {
      o.require(cli({cmd, qs}) == cli({cmd, qs}), std::string(cmd) + " " + qs + " differs between runs");
    }
    const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
    cli({"build", qs, "--format", "json", "--out", a});
    cli({"build", qs, "--format", "json", "--out", b});
    o.require(read_file(a) == read_file(b), "build " + qs + " JSON export differs between runs");
    cli({"build", qs, "--format", "dot", "--out", a});
    cli({"build", qs, "--format", "dot", "--out", b});
    o.require(read_file(a) == read_file(b), "build " + qs + " DOT export differs between runs");
  }
  const std::string csv_a = (dir / "a.csv").string(), csv_b = (dir / "b.csv").string();
  std::filesystem::remove(csv_a);
  std::filesystem::remove(csv_b);
  const std::vector<std::string> sweep = {"sweep", "--from", "3", "--to", std::to_string(kDeterminismEnd),
                                          "--classes", "3mod4,5mod8", "--jobs", "2", "--no-timing", "--out"};
  auto with = [&](const std::string& path) {
    auto args = sweep;
    args.push_back(path);
    return args;
  };
  cli(with(csv_a));
  cli(with(csv_b));
  o.require(!read_file(csv_a).empty() && read_file(csv_a) == read_file(csv_b), "sweep CSV differs between runs");
  o.require(cli({"sweep", "--from", "3", "--to", "128", "--no-timing"}) ==
                cli({"sweep", "--from", "3", "--to", "128", "--no-timing", "--jobs", "1"}),
            "sweep stdout depends on the worker count");
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = std::to_string(orders.size()) + " field orders";
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;
  auto run = [&](std::string name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << (o.detail.empty() ? "" : "  (" + o.detail + ")")
              << std::endl;
    results.emplace_back(std::move(name), std::move(o));
  };

  run("1 F_11 reproduction", criterion_f11);
  run("2 F_13 nullity", criterion_f13);
  run("3 F_5 emptiness", criterion_f5);
  run("4 F_29 census", criterion_f29);
  SweepOutcome sweep;
  bool swept = false;
  auto from_sweep = [&](Outcome SweepOutcome::*member) {
    return [&, member] {
      if (!swept) {
        sweep = criteria_sweep();
        swept = true;
      }
      return sweep.*member;
    };
  };
  run("5 vertex-count formulas", from_sweep(&SweepOutcome::c5));
  run("6 divisibility and parity", from_sweep(&SweepOutcome::c6));
  run("7 structural properties", from_sweep(&SweepOutcome::c7));
  run("8 nontriviality boundary", from_sweep(&SweepOutcome::c8));
  run("9 extension field q=125", criterion_extension);
  run("10 determinism", criterion_determinism);

  int failed = 0;
  for (const auto& [name, o] : results) failed += !o.pass;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed;
}
