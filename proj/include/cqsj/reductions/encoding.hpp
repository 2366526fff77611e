#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cqsj/database.hpp"
#include "cqsj/error.hpp"
#include "cqsj/query.hpp"
#include "cqsj/structure/homomorphism.hpp"

namespace cqsj::reductions {

/// One atom occurrence of a query, renamed to a fresh symbol.
struct Occurrence {
  std::string symbol;
  std::string relation;
  std::size_t atom_index = 0;
  std::size_t arity = 0;
};

using OccurrenceMap = std::vector<Occurrence>;

struct Relabeled {
  Query query;
  OccurrenceMap occurrences;
};

/// Gives every atom its own symbol: the relation name followed by a running
/// index per relation (R(x,y), R(y,z) becomes R1(x,y), R2(y,z)).
inline Relabeled relabel_self_join_free(const Query& q) {
  std::set<std::string> taken;
  for (const auto& a : q.atoms()) taken.insert(a.relation);
  std::map<std::string, std::size_t> counter;
  Relabeled out;
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < q.atoms().size(); ++i) {
    const Atom& a = q.atoms()[i];
    std::string symbol = a.relation + std::to_string(++counter[a.relation]);
    while (taken.count(symbol)) symbol += "_";
    taken.insert(symbol);
    out.occurrences.push_back({symbol, a.relation, i, a.arity()});
    atoms.push_back({symbol, a.args});
  }
  out.query = Query(std::move(atoms), q.free_vars(), q.head());
  return out;
}

/// Copies each source relation once per occurrence, under the fresh symbol.
inline Database duplicate_db(const OccurrenceMap& map, const Database& db) {
  DatabaseBuilder builder;
  for (const auto& occ : map) {
    builder.declare(occ.symbol, occ.arity);
    const Relation* rel = db.find(occ.relation);
    if (!rel) continue;
    if (rel->arity() != occ.arity)
      throw SchemaError("relation " + occ.relation + " has arity " + std::to_string(rel->arity()) + ", query uses " +
                        std::to_string(occ.arity));
    for (std::size_t i = 0; i < rel->size(); ++i) builder.add(occ.symbol, to_values(db, rel->row(i)));
  }
  return builder.build();
}

/// Turns each fact R_i(a1..al) of the occurrence R(x1..xl) into
/// R(pair(a1,x1), .., pair(al,xl)).
inline Database encoding_trick(const Query& q, const OccurrenceMap& map, const Database& d_prime) {
  std::map<std::string, const Occurrence*> by_symbol;
  for (const auto& occ : map) {
    if (occ.atom_index >= q.atoms().size()) throw SchemaError("occurrence map does not fit the query");
    by_symbol[occ.symbol] = &occ;
  }
  for (const auto& [name, _] : d_prime.relations())
    if (!by_symbol.count(name)) throw SchemaError("relation " + name + " is not an occurrence symbol of the query");

  DatabaseBuilder builder;
  for (const auto& occ : map) {
    const Atom& atom = q.atoms()[occ.atom_index];
    builder.declare(atom.relation, atom.arity());
    const Relation* rel = d_prime.find(occ.symbol);
    if (!rel) continue;
    if (rel->arity() != atom.arity())
      throw SchemaError("relation " + occ.symbol + " has arity " + std::to_string(rel->arity()) + ", expected " +
                        std::to_string(atom.arity()));
    for (std::size_t i = 0; i < rel->size(); ++i) {
      const auto row = to_values(d_prime, rel->row(i));
      std::vector<Value> encoded;
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j].is_pair()) throw SchemaError("encoding input must hold atomic values, got " + row[j].text());
        encoded.push_back(Value::pair(row[j], atom.args[j]));
      }
      builder.add(atom.relation, std::move(encoded));
    }
  }
  return builder.build();
}

enum class EndoClass { identity, automorphism, non_automorphism };

inline std::string to_string(EndoClass c) {
  switch (c) {
    case EndoClass::identity: return "identity";
    case EndoClass::automorphism: return "automorphism";
    case EndoClass::non_automorphism: return "non-automorphism";
  }
  return "?";
}

struct DecodedAnswer {
  std::vector<Value> data_part;
  VarMap variable_part;
  Query image;
  EndoClass endo_class = EndoClass::identity;
};

/// Splits an answer over pair values into data and variable parts. The
/// query must be full, so the answer is the whole valuation.
inline DecodedAnswer decode_solution(const Query& q, const AnswerTuple& ans) {
  if (!q.is_full()) throw SchemaError("decode_solution needs a full query");
  if (ans.size() != q.free_vars().size()) throw SchemaError("answer arity does not match the query");
  DecodedAnswer out;
  const auto vars = q.var_set();
  for (std::size_t i = 0; i < ans.size(); ++i) {
    if (!ans[i].is_pair()) throw SchemaError("value " + ans[i].text() + " is not a pair");
    const std::string var = ans[i].var();
    if (!vars.count(var)) throw SchemaError("variable part " + var + " is not a query variable");
    out.data_part.push_back(ans[i].data());
    out.variable_part[q.free_vars()[i]] = var;
  }
  if (!structure::is_endomorphism(q, out.variable_part))
    throw SchemaError("variable part of the answer is not an endomorphism");
  out.image = q.with_atoms(structure::image_atoms(q, out.variable_part));
  bool identity = true;
  for (const auto& [from, to] : out.variable_part) identity = identity && from == to;
  out.endo_class = identity                                         ? EndoClass::identity
                   : structure::is_injective(out.variable_part)     ? EndoClass::automorphism
                                                                    : EndoClass::non_automorphism;
  return out;
}

}  // namespace cqsj::reductions
