#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cqsj/engines/select.hpp"
#include "cqsj/reductions/generators.hpp"

namespace cqsj::engines {

struct BenchRow {
  std::size_t requested = 0;
  std::size_t facts = 0;
  DelayStats stats;

  nlohmann::json to_json() const {
    auto j = stats.to_json();
    j["size"] = requested;
    j["facts"] = facts;
    return j;
  }
};

/// Finite-sample delay class over increasing sizes: CONSTANT when the
/// largest gap grows at most 2x from the smallest to the largest instance,
/// LINEAR when gap per fact does, UNBOUNDED otherwise.
inline std::string delay_class(const std::vector<BenchRow>& rows) {
  if (rows.size() < 2) return "CONSTANT";
  const auto& a = rows.front();
  const auto& b = rows.back();
  const double gap_a = std::max<double>(1, double(a.stats.max_gap));
  const double gap_b = double(b.stats.max_gap);
  if (gap_b / gap_a <= 2.0) return "CONSTANT";
  const double per_a = gap_a / std::max<double>(1, double(a.facts));
  const double per_b = gap_b / std::max<double>(1, double(b.facts));
  if (per_b / per_a <= 2.0) return "LINEAR";
  return "UNBOUNDED";
}

/// Generates one database per size and measures the engine on it.
inline std::vector<BenchRow> bench_delay(const Query& q, const std::string& engine, const std::vector<std::size_t>& sizes,
                                         const std::string& gen, std::uint64_t seed, const EngineOptions& opt = {}) {
  std::vector<BenchRow> rows;
  for (std::size_t size : sizes) {
    const Database db = reductions::gen_named_db(gen, q, size, seed);
    BenchRow row;
    row.requested = size;
    row.facts = db.size();
    row.stats = measure_delay([&](Ticks t) { return make_engine(engine, q, db, std::move(t), opt).cursor; });
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cqsj::engines
