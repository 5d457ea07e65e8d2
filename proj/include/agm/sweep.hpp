#pragma once

// Parameter sweeps over field orders with CSV persistence and resume.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "agm/field.hpp"
#include "agm/swarm.hpp"

namespace agm {

struct SweepRow {
  std::uint64_t q = 0;
  std::uint32_t p = 0;
  unsigned k = 0;
  ModClass mod_class = ModClass::three_mod_4;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t components_total = 0;
  std::size_t components_nontrivial = 0;
  std::map<std::size_t, std::size_t> cycle_histogram;
  bool checks_passed = false;
  std::uint64_t wall_ms = 0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Parses "3mod4,5mod8" style lists. Throws std::invalid_argument on unknown names.
std::set<ModClass> parse_mod_classes(const std::string& list);

/// Odd prime powers in [from, to] whose residue class is selected, ascending.
std::vector<std::uint64_t> sweep_orders(std::uint64_t from, std::uint64_t to, const std::set<ModClass>& classes,
                                        bool primes_only);

/// build + analyze + census + verify for one q, single threaded. Failures
/// (including exceptions) leave checks_passed false.
SweepRow process_order(std::uint64_t q, std::uint64_t max_q, bool record_timing = true);

/// Processes orders on `jobs` workers; rows come back sorted by q.
std::vector<SweepRow> run_sweep(const std::vector<std::uint64_t>& orders, unsigned jobs, std::uint64_t max_q,
                                bool record_timing = true);

inline constexpr const char* kSweepCsvHeader =
    "q,p,k,mod_class,vertices,edges,components_total,components_nontrivial,cycle_histogram,checks_passed,wall_ms";

std::string to_csv_line(const SweepRow& row);
/// Throws std::invalid_argument on a malformed line.
SweepRow parse_csv_line(const std::string& line);

/// Rows keyed by q; a missing file yields an empty map.
std::map<std::uint64_t, SweepRow> read_sweep_csv(const std::filesystem::path& path);
void write_sweep_csv(const std::filesystem::path& path, const std::map<std::uint64_t, SweepRow>& rows);

}  // namespace agm
