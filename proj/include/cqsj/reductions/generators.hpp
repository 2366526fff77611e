#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cqsj/database.hpp"
#include "cqsj/error.hpp"
#include "cqsj/query.hpp"

namespace cqsj::reductions {

using Schema = std::map<std::string, std::size_t>;

inline Schema schema_of(const Query& q) {
  Schema s;
  for (const auto& a : q.atoms()) s[a.relation] = a.arity();
  return s;
}

/// Up to m distinct facts over the domain c0..c{n-1}, each relation picked
/// uniformly. Nullary relations hold with probability 1/2.
inline Database gen_random_db(const Schema& schema, std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DatabaseBuilder builder;
  std::vector<std::pair<std::string, std::size_t>> rels;
  double capacity = 0;
  for (const auto& [name, arity] : schema) {
    builder.declare(name, arity);
    if (arity == 0) {
      if (std::bernoulli_distribution(0.5)(rng)) builder.add(name, {});
      continue;
    }
    rels.emplace_back(name, arity);
    double cap = 1;
    for (std::size_t i = 0; i < arity; ++i) cap *= double(n);
    capacity += cap;
  }
  if (rels.empty() || n == 0) return builder.build();
  m = std::min<std::size_t>(m, static_cast<std::size_t>(capacity));
  std::uniform_int_distribution<std::size_t> pick_rel(0, rels.size() - 1), pick_val(0, n - 1);
  std::size_t attempts = 0;
  while (builder.size() < m && attempts++ < 20 * m + 100) {
    const auto& [name, arity] = rels[pick_rel(rng)];
    std::vector<Value> row;
    for (std::size_t i = 0; i < arity; ++i) row.push_back(Value::atomic("c" + std::to_string(pick_val(rng))));
    builder.add(name, std::move(row));
  }
  return builder.build();
}

/// Random noise as in gen_random_db plus `plants` injective valuations of q
/// written into the database, so that q has answers.
inline Database gen_planted_db(const Query& q, std::size_t n, std::size_t m, std::size_t plants,
                               std::uint64_t seed) {
  const Database noise = gen_random_db(schema_of(q), n, m, seed);
  DatabaseBuilder builder;
  for (const auto& [name, arity] : schema_of(q)) builder.declare(name, arity);
  for (const auto& [name, row] : noise.facts()) builder.add(name, row);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> ids(std::max(n, q.vars().size()));
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  for (std::size_t p = 0; p < plants; ++p) {
    // Distinct values per variable, so a plant adds no accidental loops.
    std::shuffle(ids.begin(), ids.end(), rng);
    std::map<std::string, Value> val;
    for (std::size_t i = 0; i < q.vars().size(); ++i) val[q.vars()[i]] = Value::atomic("c" + std::to_string(ids[i]));
    for (const auto& a : q.atoms()) {
      std::vector<Value> row;
      for (const auto& v : a.args) row.push_back(val.at(v));
      builder.add(a.relation, std::move(row));
    }
  }
  return builder.build();
}

/// Disjoint injective copies of q until about m facts, plus `noise`
/// random facts over the domain of the copies.
inline Database gen_copies_db(const Query& q, std::size_t m, double noise, std::uint64_t seed) {
  DatabaseBuilder builder;
  for (const auto& [name, arity] : schema_of(q)) builder.declare(name, arity);
  const auto vars = q.vars();
  const std::size_t per_copy = std::max<std::size_t>(1, q.atoms().size());
  const std::size_t copies = std::max<std::size_t>(1, m / per_copy);
  for (std::size_t c = 0; c < copies; ++c)
    for (const auto& a : q.atoms()) {
      std::vector<Value> row;
      for (const auto& v : a.args)
        row.push_back(Value::atomic("c" + std::to_string(c * vars.size() + static_cast<std::size_t>(
                                                                              std::find(vars.begin(), vars.end(), v) -
                                                                              vars.begin()))));
      builder.add(a.relation, std::move(row));
    }
  const auto extra = static_cast<std::size_t>(noise * double(m));
  if (extra > 0) {
    const Database more = gen_random_db(schema_of(q), copies * vars.size(), extra, seed);
    for (const auto& [name, row] : more.facts()) builder.add(name, row);
  }
  return builder.build();
}

/// Database of roughly `size` facts for q, by generator name:
/// random (uniform, domain = size), copies (disjoint copies of q),
/// noisy (copies plus 10% random facts), dense (domain = 2*sqrt(size)).
inline Database gen_named_db(const std::string& gen, const Query& q, std::size_t size, std::uint64_t seed) {
  if (gen == "random") return gen_random_db(schema_of(q), size, size, seed);
  if (gen == "copies") return gen_copies_db(q, size, 0.0, seed);
  if (gen == "noisy") return gen_copies_db(q, size, 0.1, seed);
  if (gen == "dense")
    return gen_random_db(schema_of(q), static_cast<std::size_t>(2 * std::sqrt(double(size))) + 1, size, seed);
  throw SchemaError("unknown generator " + gen + " (random | copies | noisy | dense)");
}

}  // namespace cqsj::reductions
