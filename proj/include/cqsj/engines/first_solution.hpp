#pragma once

#include <map>
#include <optional>

#include "cqsj/engines/acyclic.hpp"
#include "cqsj/error.hpp"
#include "cqsj/structure/homomorphism.hpp"
#include "cqsj/structure/join_tree.hpp"

namespace cqsj::engines {

/// One answer of a full query with an acyclic core: the first answer of the
/// full-core, pulled back along a retraction of q onto the core.
inline std::optional<Answer> first_solution(const Query& q, const Database& db, Ticks ticks) {
  if (!q.is_full()) throw InapplicableEngine("first solution requires a full query");
  const Query fc = structure::full_core(q);
  if (!structure::is_acyclic(fc)) throw InapplicableEngine("query has a cyclic core");
  const auto h = structure::homomorphism_onto(q, fc);
  if (!h) throw InvalidWitness("no homomorphism onto the core");
  FullAcyclicCursor core_cursor(fc, db, ticks);
  auto core_answer = core_cursor.next();
  if (!core_answer) return std::nullopt;
  std::map<std::string, ValueId> value;
  for (std::size_t i = 0; i < fc.free_vars().size(); ++i) value[fc.free_vars()[i]] = (*core_answer)[i];
  Answer out;
  for (const auto& v : q.free_vars()) {
    ticks->tick();
    out.push_back(value.at(h->at(v)));
  }
  return out;
}

}  // namespace cqsj::engines
