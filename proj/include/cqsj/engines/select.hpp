#pragma once

#include <memory>
#include <string>

#include "cqsj/engines/acyclic.hpp"
#include "cqsj/engines/bespoke.hpp"
#include "cqsj/engines/cheater.hpp"
#include "cqsj/engines/mirror.hpp"
#include "cqsj/engines/oracle.hpp"
#include "cqsj/engines/untangle.hpp"
#include "cqsj/error.hpp"
#include "cqsj/structure/images.hpp"
#include "cqsj/structure/join_tree.hpp"

namespace cqsj::engines {

struct EngineOptions {
  bool dedup = true;
  Limits limits = Limits::from_env();
};

/// A constructed cursor plus the engine actually used.
struct EngineRun {
  CursorPtr cursor;
  std::string engine;
  std::string warning;
};

namespace detail {

inline EngineRun build_named(const std::string& name, const Query& q, const Database& db, Ticks ticks,
                             const EngineOptions& opt) {
  if (name == "oracle") return {std::make_unique<OracleCursor>(q, db, std::move(ticks)), name, {}};
  if (name == "acyclic") {
    if (!q.is_full() || !structure::is_acyclic(q))
      throw InapplicableEngine("acyclic engine needs a full acyclic query");
    return {std::make_unique<FullAcyclicCursor>(q, db, std::move(ticks)), name, {}};
  }
  if (name == "untangle") {
    if (!q.is_full()) throw InapplicableEngine("untangle engine needs a full query");
    const auto outcome = structure::is_untangleable(q, 100000, opt.limits);
    if (outcome.status != structure::Tristate::yes || !outcome.witness)
      throw InapplicableEngine("query is not untangleable");
    structure::validate_witness(q, *outcome.witness);
    return {make_untangle_stage(q, outcome.witness->steps, std::make_shared<Database>(db), std::move(ticks)), name,
            {}};
  }
  if (name == "mirror") {
    if (!q.is_full()) throw InapplicableEngine("mirror engine needs a full query");
    const auto w = structure::is_mirror(q, opt.limits);
    if (!w) throw InapplicableEngine("query is not a mirror query");
    return {std::make_unique<MirrorCursor>(q, *w, db, std::move(ticks)), name, {}};
  }
  if (name.starts_with("bespoke")) {
    std::optional<Strategy> s;
    if (name.size() > 8 && name[7] == ':') s = strategy_from_name(name.substr(8));
    else if (name == "bespoke") s = bespoke_strategy_for(q);
    if (!s) throw InapplicableEngine("no bespoke strategy for " + name);
    const auto registered = bespoke_strategy_for(q);
    if (registered != s) throw InapplicableEngine("query does not match strategy " + strategy_name(*s));
    auto cursor = opt.dedup ? make_bespoke(*s, q, db, std::move(ticks)) : make_bespoke_raw(*s, q, db, std::move(ticks));
    return {std::move(cursor), "bespoke:" + strategy_name(*s), {}};
  }
  throw SchemaError("unknown engine " + name);
}

}  // namespace detail

/// Engine used by `auto`: the strongest guarantee first (constant delay,
/// then linear delay), falling back to the oracle.
inline std::string auto_engine(const Query& q, const Limits& limits = Limits::from_env()) {
  if (!q.is_full()) return "oracle";
  if (structure::is_acyclic(q)) return "acyclic";
  if (structure::is_mirror(q, limits)) return "mirror";
  const auto s = bespoke_strategy_for(q);
  if (s && duplication_bound(*s) > 1) return "bespoke:" + strategy_name(*s);
  if (structure::is_untangleable(q, 100000, limits).status == structure::Tristate::yes) return "untangle";
  if (s) return "bespoke:" + strategy_name(*s);
  return "oracle";
}

/// Builds the cursor for `engine` (auto | oracle | acyclic | untangle |
/// mirror | bespoke[:<id>]). Throws InapplicableEngine when the query does
/// not fit the requested engine.
inline EngineRun make_engine(const std::string& engine, const Query& q, const Database& db, Ticks ticks,
                             const EngineOptions& opt = {}) {
  if (engine != "auto") return detail::build_named(engine, q, db, std::move(ticks), opt);
  const std::string chosen = auto_engine(q, opt.limits);
  auto run = detail::build_named(chosen, q, db, std::move(ticks), opt);
  if (chosen == "oracle") run.warning = "no efficient engine applies; using the oracle";
  return run;
}

}  // namespace cqsj::engines
