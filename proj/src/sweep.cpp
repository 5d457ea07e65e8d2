#include "agm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "agm/verify.hpp"

namespace agm {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::uint64_t to_u64(const std::string& s) {
  std::size_t used = 0;
  const unsigned long long v = std::stoull(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
  return v;
}

ModClass parse_mod_class(const std::string& name) {
  if (name == "3mod4") return ModClass::three_mod_4;
  if (name == "5mod8") return ModClass::five_mod_8;
  if (name == "1mod8") return ModClass::one_mod_8;
  throw std::invalid_argument("unknown residue class '" + name + "'");
}

}  // namespace

std::set<ModClass> parse_mod_classes(const std::string& list) {
  std::set<ModClass> out;
  for (const std::string& name : split(list, ',')) {
    if (!name.empty()) out.insert(parse_mod_class(name));
  }
  if (out.empty()) throw std::invalid_argument("no residue classes selected");
  return out;
}

std::vector<std::uint64_t> sweep_orders(std::uint64_t from, std::uint64_t to, const std::set<ModClass>& classes,
                                        bool primes_only) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = std::max<std::uint64_t>(from, 3); q <= to; ++q) {
    if (q % 2 == 0 || !classes.contains(mod_class_of(q))) continue;
    const auto pk = prime_power_decomposition(q);
    if (!pk || (primes_only && pk->second != 1)) continue;
    out.push_back(q);
  }
  return out;
}

SweepRow process_order(std::uint64_t q, std::uint64_t max_q, bool record_timing) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRow row;
  row.q = q;
  row.mod_class = mod_class_of(q);
  try {
    FieldCtx ctx = FieldCtx::from_order(q);
    row.p = ctx.characteristic();
    row.k = ctx.degree();
    const SwarmGraph graph = SwarmGraph::build(std::move(ctx), {.max_q = max_q, .threads = 1});
    const SwarmAnalysis analysis = analyze(graph);
    const CycleCensus cen = census(graph, analysis);
    row.vertices = cen.vertex_count;
    row.edges = cen.edge_count;
    row.components_total = cen.components_total;
    row.components_nontrivial = cen.components_nontrivial;
    row.cycle_histogram = cen.cycle_lengths;
    row.checks_passed = verify(graph, analysis).all_passed();
  } catch (const std::exception&) {
    row.checks_passed = false;
  }
  if (record_timing) {
    row.wall_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  }
  return row;
}

std::vector<SweepRow> run_sweep(const std::vector<std::uint64_t>& orders, unsigned jobs, std::uint64_t max_q,
                                bool record_timing) {
  std::vector<SweepRow> rows(orders.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < orders.size(); i = next++) rows[i] = process_order(orders[i], max_q, record_timing);
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(orders.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.q < b.q; });
  return rows;
}

std::string to_csv_line(const SweepRow& row) {
  std::ostringstream out;
  out << row.q << ',' << row.p << ',' << row.k << ',' << to_string(row.mod_class) << ',' << row.vertices << ','
      << row.edges << ',' << row.components_total << ',' << row.components_nontrivial << ','
      << format_histogram(row.cycle_histogram) << ',' << (row.checks_passed ? "true" : "false") << ',' << row.wall_ms;
  return out.str();
}

SweepRow parse_csv_line(const std::string& line) {
  const auto f = split(line, ',');
  if (f.size() != 11) throw std::invalid_argument("expected 11 CSV fields: '" + line + "'");
  SweepRow row;
  row.q = to_u64(f[0]);
  row.p = static_cast<std::uint32_t>(to_u64(f[1]));
  row.k = static_cast<unsigned>(to_u64(f[2]));
  row.mod_class = parse_mod_class(f[3]);
  row.vertices = to_u64(f[4]);
  row.edges = to_u64(f[5]);
  row.components_total = to_u64(f[6]);
  row.components_nontrivial = to_u64(f[7]);
  for (const std::string& pair : split(f[8], ';')) {
    const auto colon = pair.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad histogram entry '" + pair + "'");
    row.cycle_histogram[to_u64(pair.substr(0, colon))] = to_u64(pair.substr(colon + 1));
  }
  if (f[9] != "true" && f[9] != "false") throw std::invalid_argument("bad checks_passed '" + f[9] + "'");
  row.checks_passed = f[9] == "true";
  row.wall_ms = to_u64(f[10]);
  return row;
}

std::map<std::uint64_t, SweepRow> read_sweep_csv(const std::filesystem::path& path) {
  std::map<std::uint64_t, SweepRow> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (line != kSweepCsvHeader) throw std::invalid_argument(path.string() + " does not have the sweep CSV header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SweepRow row = parse_csv_line(line);
    rows[row.q] = std::move(row);
  }
  return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::map<std::uint64_t, SweepRow>& rows) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << kSweepCsvHeader << '\n';
    for (const auto& [q, row] : rows) out << to_csv_line(row) << '\n';
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace agm
