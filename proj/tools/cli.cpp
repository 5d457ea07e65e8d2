#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <thread>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "agm/agm.hpp"
#include "agm/export.hpp"
#include "agm/field.hpp"
#include "agm/swarm.hpp"
#include "agm/sweep.hpp"
#include "agm/verify.hpp"

namespace agm::cli {

namespace {

// Exit-code carrying failure raised inside a subcommand.
struct Exit {
  int code;
  std::string message;
};

std::uint64_t default_max_q() {
  if (const char* env = std::getenv("AGM_MAX_Q")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return kDefaultGraphBound;
}

FieldCtx parse_field(const std::string& spec) {
  try {
    const auto caret = spec.find('^');
    auto number = [](const std::string& s) {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw FieldError("malformed field '" + s + "'");
      }
      if (s.size() > 18) throw FieldBoundError("field order " + s + " is too large");
      return std::stoull(s);
    };
    if (caret == std::string::npos) return FieldCtx::from_order(number(spec));
    const std::uint64_t p = number(spec.substr(0, caret));
    const std::uint64_t k = number(spec.substr(caret + 1));
    if (k == 0 || k > kMaxDegree) throw FieldError("bad extension degree in '" + spec + "'");
    return FieldCtx::create(p, static_cast<unsigned>(k));
  } catch (const FieldBoundError& e) {
    throw Exit{kExitBoundExceeded, e.what()};
  } catch (const FieldError& e) {
    throw Exit{kExitInvalidField, e.what()};
  }
}

SwarmGraph build_graph(FieldCtx ctx, std::uint64_t max_q, unsigned jobs) {
  try {
    return SwarmGraph::build(std::move(ctx), {.max_q = max_q, .threads = jobs});
  } catch (const GraphBoundError& e) {
    throw Exit{kExitBoundExceeded, std::string(e.what()) + " (raise with --max-q or AGM_MAX_Q)"};
  }
}

std::string field_name(const FieldCtx& ctx) {
  std::string s = "q=" + std::to_string(ctx.order()) + " (p=" + std::to_string(ctx.characteristic()) +
                  ", k=" + std::to_string(ctx.degree()) + ", " + std::string(to_string(ctx.mod_class())) + ")";
  return s;
}

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path.empty() || path == "-") {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  write(file);
  if (!file) throw std::runtime_error("write to " + path + " failed");
}

void print_warnings(const SwarmGraph& graph, const SwarmAnalysis& analysis, std::ostream& err) {
  for (const std::string& w : graph.warnings()) err << "warning: " << w << "\n";
  for (const Component& c : analysis.components) {
    if (c.structure_error) err << "warning: structure violation: " << *c.structure_error << "\n";
  }
}

std::string join_vertices(const FieldCtx& ctx, const std::vector<Vertex>& vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) s += ", ";
    s += format_vertex(ctx, vs[i]);
  }
  return s;
}

struct Options {
  std::string field;
  std::uint64_t max_q = kDefaultGraphBound;
  unsigned jobs = 0;
  std::string format;
  std::string out_path;
  std::optional<std::size_t> component;
  std::string a, b;
  std::size_t steps = 0;
  bool corrupt = false;
  std::uint64_t from = 0, to = 0;
  std::string classes = "3mod4,5mod8";
  bool force = false;
  bool primes_only = false;
  bool no_timing = false;
};

int cmd_build(const Options& o, std::ostream& out, std::ostream& err) {
  const SwarmGraph graph = build_graph(parse_field(o.field), o.max_q, o.jobs);
  const SwarmAnalysis analysis = analyze(graph);
  const CycleCensus cen = census(graph, analysis);
  print_warnings(graph, analysis, err);
  if (!o.format.empty()) {
    const ExportFormat fmt = parse_export_format(o.format);
    emit(o.out_path, out, [&](std::ostream& s) { write_export(s, graph, analysis, fmt); });
  }
  std::size_t cycles = 0;
  for (const auto& [n, m] : cen.cycle_lengths) cycles += m;
  out << field_name(graph.ctx()) << ": " << cen.vertex_count << " vertices, " << cen.edge_count << " edges, "
      << cen.components_total << " components (" << cen.components_nontrivial << " nontrivial, "
      << cen.components_trivial << " trivial), " << cycles << " cycles";
  if (!cen.cycle_lengths.empty()) out << " [" << format_histogram(cen.cycle_lengths) << "]";
  out << "\n";
  return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out, std::ostream& err) {
  const ExportFormat fmt = parse_export_format(o.format);
  const SwarmGraph graph = build_graph(parse_field(o.field), o.max_q, o.jobs);
  const SwarmAnalysis analysis = analyze(graph);
  print_warnings(graph, analysis, err);
  if (o.component && *o.component >= analysis.components.size()) {
    throw Exit{kExitInvalidVertex, "component " + std::to_string(*o.component) + " does not exist"};
  }
  emit(o.out_path, out, [&](std::ostream& s) { write_export(s, graph, analysis, fmt, o.component); });
  return kExitOk;
}

int cmd_sequence(const Options& o, std::ostream& out, std::ostream&) {
  const FieldCtx ctx = parse_field(o.field);
  Vertex start;
  try {
    start = make_vertex(ctx, ctx.parse(o.a), ctx.parse(o.b));
  } catch (const FieldError& e) {
    throw Exit{kExitInvalidVertex, e.what()};
  } catch (const VertexError& e) {
    throw Exit{kExitInvalidVertex, e.what()};
  }
  AgmSequence seq;
  try {
    seq = agm_sequence(ctx, start);
  } catch (const SequenceError& e) {
    throw Exit{kExitNoSequence, e.what()};
  }
  out << "AGM" << format_vertex(ctx, start) << " over F_" << ctx.order() << ": ";
  if (!seq.preperiod.empty()) out << join_vertices(ctx, seq.preperiod) << ", ";
  out << "| period: " << join_vertices(ctx, seq.period) << " |\n";
  out << "preperiod length " << seq.preperiod.size() << ", period length " << seq.period.size() << "\n";
  if (o.steps > 0) {
    std::vector<Vertex> terms;
    for (std::size_t i = 0; i < o.steps; ++i) {
      terms.push_back(i < seq.preperiod.size() ? seq.preperiod[i]
                                               : seq.period[(i - seq.preperiod.size()) % seq.period.size()]);
    }
    out << "first " << o.steps << " terms: " << join_vertices(ctx, terms) << "\n";
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  SwarmGraph graph = build_graph(parse_field(o.field), o.max_q, o.jobs);
  if (o.corrupt) {
    // drop the first edge so the structure checks have something to reject
    for (VertexId v = 0; v < graph.vertex_count(); ++v) {
      if (!graph.children(v).empty()) {
        graph.remove_edge(v, graph.children(v)[0]);
        break;
      }
    }
  }
  const SwarmAnalysis analysis = analyze(graph);
  print_warnings(graph, analysis, err);
  const VerificationReport report = verify(graph, analysis);
  emit(o.out_path, out, [&](std::ostream& s) { s << report.to_json().dump(2) << "\n"; });
  for (const CheckRecord& c : report.checks) {
    if (c.status == CheckStatus::fail) err << "FAILED " << c.name << ": " << c.witness.dump() << "\n";
  }
  return report.all_passed() ? kExitOk : kExitChecksFailed;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.from > o.to) throw Exit{kExitInvalidField, "--from must not exceed --to"};
  std::set<ModClass> classes;
  try {
    classes = parse_mod_classes(o.classes);
  } catch (const std::invalid_argument& e) {
    throw Exit{kExitInvalidField, e.what()};
  }
  const std::vector<std::uint64_t> orders = sweep_orders(o.from, o.to, classes, o.primes_only);
  if (!orders.empty() && orders.back() > o.max_q) {
    throw Exit{kExitBoundExceeded, "q = " + std::to_string(orders.back()) + " exceeds the graph bound " +
                                       std::to_string(o.max_q) + " (raise with --max-q or AGM_MAX_Q)"};
  }
  std::map<std::uint64_t, SweepRow> rows;
  if (!o.out_path.empty()) rows = read_sweep_csv(o.out_path);
  std::vector<std::uint64_t> todo;
  for (std::uint64_t q : orders) {
    if (o.force || !rows.contains(q)) todo.push_back(q);
  }
  const unsigned jobs = o.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.jobs;
  for (SweepRow& row : run_sweep(todo, jobs, o.max_q, !o.no_timing)) rows[row.q] = std::move(row);

  bool all_passed = true;
  for (std::uint64_t q : orders) {
    if (!rows.at(q).checks_passed) {
      all_passed = false;
      err << "checks failed for q = " << q << "\n";
    }
  }
  if (o.out_path.empty()) {
    out << kSweepCsvHeader << "\n";
    for (const auto& [q, row] : rows) out << to_csv_line(row) << "\n";
  } else {
    write_sweep_csv(o.out_path, rows);
    out << "swept " << orders.size() << " field orders (" << todo.size() << " computed, "
        << orders.size() - todo.size() << " resumed) into " << o.out_path << "\n";
  }
  return all_passed ? kExitOk : kExitChecksFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"AGM graphs over finite fields of odd characteristic"};
  app.require_subcommand(1);
  Options o;
  o.max_q = default_max_q();

  auto add_field = [&](CLI::App* sub) {
    sub->add_option("field", o.field, "field order q, or p^k")->required();
    sub->add_option("--max-q", o.max_q, "largest q to materialize (env AGM_MAX_Q)");
    sub->add_option("--jobs", o.jobs, "worker threads for graph construction (0: all cores)");
  };

  CLI::App* build = app.add_subcommand("build", "build the graph and print a summary");
  add_field(build);
  auto* build_fmt = build->add_option("--format", o.format, "export format")->check(CLI::IsMember({"dot", "json"}));
  build->add_option("--out", o.out_path, "export destination")->needs(build_fmt);
  build_fmt->needs(build->get_option("--out"));

  CLI::App* exp = app.add_subcommand("export", "write the graph or one component as DOT or JSON");
  add_field(exp);
  exp->add_option("--format", o.format, "export format")->required()->check(CLI::IsMember({"dot", "json"}));
  exp->add_option("--component", o.component, "restrict to one component id");
  exp->add_option("--out", o.out_path, "destination (default stdout)");

  CLI::App* seq = app.add_subcommand("sequence", "print the AGM sequence starting at (a, b)");
  seq->add_option("field", o.field, "field order q, or p^k")->required();
  seq->add_option("a", o.a, "first coordinate (integer, or c0,c1,... for k > 1)")->required();
  seq->add_option("b", o.b, "second coordinate")->required();
  seq->add_option("--steps", o.steps, "also print the first N terms");

  CLI::App* ver = app.add_subcommand("verify", "run every check and print a JSON report");
  add_field(ver);
  ver->add_option("--out", o.out_path, "report destination (default stdout)");
  ver->add_flag("--corrupt-edge", o.corrupt, "remove one edge before checking (negative test)")->group("");

  CLI::App* sweep = app.add_subcommand("sweep", "build, census and verify a range of field orders");
  sweep->add_option("--from", o.from, "smallest q")->required();
  sweep->add_option("--to", o.to, "largest q")->required();
  sweep->add_option("--classes", o.classes, "residue classes, e.g. 3mod4,5mod8");
  sweep->add_option("--jobs", o.jobs, "parallel workers (0: all cores)");
  sweep->add_option("--out", o.out_path, "CSV file; existing rows are kept (default stdout)");
  sweep->add_option("--max-q", o.max_q, "largest q to materialize (env AGM_MAX_Q)");
  sweep->add_flag("--force", o.force, "recompute rows already present in --out");
  sweep->add_flag("--primes-only", o.primes_only, "skip prime powers with k > 1");
  sweep->add_flag("--no-timing", o.no_timing, "write wall_ms as 0 for byte-identical reruns");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidField;
  }

  try {
    if (*build) return cmd_build(o, out, err);
    if (*exp) return cmd_export(o, out, err);
    if (*seq) return cmd_sequence(o, out, err);
    if (*ver) return cmd_verify(o, out, err);
    if (*sweep) return cmd_sweep(o, out, err);
  } catch (const Exit& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const StructureViolation& e) {
    err << "structure violation: " << e.what() << "\n";
    return kExitChecksFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitChecksFailed;
  }
  return kExitInvalidField;
}

}  // namespace agm::cli
