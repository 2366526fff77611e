#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cqsj/error.hpp"
#include "cqsj/scanner.hpp"

namespace cqsj {

/// A relational atom `R(x1,...,xk)`; variables may repeat.
struct Atom {
  std::string relation;
  std::vector<std::string> args;

  std::size_t arity() const { return args.size(); }

  std::set<std::string> var_set() const { return {args.begin(), args.end()}; }

  std::string to_string() const {
    std::string out = relation + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ',';
      out += args[i];
    }
    return out + ")";
  }

  auto operator<=>(const Atom&) const = default;
};

/// Variable-to-variable mapping (endomorphisms, isomorphisms, retractions).
using VarMap = std::map<std::string, std::string>;

inline Atom apply(const VarMap& map, const Atom& atom) {
  Atom out{atom.relation, {}};
  out.args.reserve(atom.args.size());
  for (const auto& v : atom.args) {
    auto it = map.find(v);
    out.args.push_back(it == map.end() ? v : it->second);
  }
  return out;
}

/// A conjunctive query: a set of atoms plus an ordered list of free
/// (output) variables. All other variables are existentially quantified.
///
/// Atoms keep their insertion order (duplicates are dropped) so that derived
/// names such as relabeled symbols are deterministic; equality is set-based.
class Query {
 public:
  Query() = default;

  Query(std::vector<Atom> atoms, std::vector<std::string> free_vars, std::string head = "Q")
      : free_(std::move(free_vars)), head_(std::move(head)) {
    std::set<Atom> seen;
    std::map<std::string, std::size_t> arity;
    for (auto& atom : atoms) {
      auto [it, fresh] = arity.emplace(atom.relation, atom.arity());
      if (!fresh && it->second != atom.arity())
        throw ArityError("relation " + atom.relation + " used with arities " + std::to_string(it->second) +
                         " and " + std::to_string(atom.arity()));
      if (seen.insert(atom).second) atoms_.push_back(std::move(atom));
    }
    const auto all = var_set();
    std::set<std::string> free_seen;
    for (const auto& v : free_) {
      if (!free_seen.insert(v).second) throw SchemaError("duplicate free variable " + v);
      if (!all.count(v)) throw SchemaError("free variable " + v + " does not occur in any atom");
    }
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<std::string>& free_vars() const { return free_; }
  const std::string& head() const { return head_; }

  /// Variables in order of first occurrence.
  std::vector<std::string> vars() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& atom : atoms_)
      for (const auto& v : atom.args)
        if (seen.insert(v).second) out.push_back(v);
    return out;
  }

  std::set<std::string> var_set() const {
    std::set<std::string> out;
    for (const auto& atom : atoms_) out.insert(atom.args.begin(), atom.args.end());
    return out;
  }

  std::set<Atom> atom_set() const { return {atoms_.begin(), atoms_.end()}; }

  std::size_t arity() const { return free_.size(); }
  bool is_boolean() const { return free_.empty(); }
  bool is_full() const { return free_.size() == var_set().size(); }

  bool has_self_joins() const {
    std::set<std::string> names;
    for (const auto& atom : atoms_)
      if (!names.insert(atom.relation).second) return true;
    return false;
  }

  bool is_free(const std::string& v) const { return std::find(free_.begin(), free_.end(), v) != free_.end(); }

  /// Same atoms, every variable quantified.
  Query boolean_closure() const { return Query(atoms_, {}, head_); }

  /// Same atoms, every variable free (free variables first, in order).
  Query full_closure() const {
    std::vector<std::string> free = free_;
    for (const auto& v : vars())
      if (!is_free(v)) free.push_back(v);
    return Query(atoms_, std::move(free), head_);
  }

  /// Query over `atoms` keeping those of this query's free variables that
  /// still occur, in the same order.
  Query with_atoms(std::vector<Atom> atoms) const {
    std::set<std::string> present;
    for (const auto& atom : atoms) present.insert(atom.args.begin(), atom.args.end());
    std::vector<std::string> free;
    for (const auto& v : free_)
      if (present.count(v)) free.push_back(v);
    return Query(std::move(atoms), std::move(free), head_);
  }

  friend bool operator==(const Query& a, const Query& b) {
    return a.free_ == b.free_ && a.atom_set() == b.atom_set();
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<std::string> free_;
  std::string head_ = "Q";
};

/// One hyperedge per atom: the set of its distinct variables. Atoms with the
/// same variable set collapse into one edge.
inline std::set<std::set<std::string>> hypergraph_of(const Query& q) {
  std::set<std::set<std::string>> edges;
  for (const auto& atom : q.atoms()) edges.insert(atom.var_set());
  return edges;
}

/// Parses a single Datalog-style rule `Head(v1,...,vk) :- A1, ..., Am.`
inline Query parse_query(std::string_view text) {
  detail::Scanner in(text);
  auto relation = [&] { return in.word(detail::is_upper, detail::is_ident_rest, "relation name"); };
  auto variable = [&] { return in.word(detail::is_lower, detail::is_ident_rest, "variable"); };
  auto arg_list = [&] {
    std::vector<std::string> args;
    in.expect('(');
    if (!in.consume(')')) {
      do {
        args.push_back(variable());
      } while (in.consume(','));
      in.expect(')');
    }
    return args;
  };

  const std::string head = relation();
  const std::size_t head_line = in.line(), head_col = in.column();
  std::vector<std::string> free = arg_list();
  {
    std::set<std::string> seen;
    for (const auto& v : free)
      if (!seen.insert(v).second) throw ParseError("duplicate head variable " + v, head_line, head_col);
  }
  in.expect(":-");
  std::vector<Atom> atoms;
  std::map<std::string, std::size_t> arity;
  if (in.peek() != '.') {
    do {
      const std::size_t line = in.line(), col = in.column();
      Atom atom{relation(), arg_list()};
      auto [it, fresh] = arity.emplace(atom.relation, atom.arity());
      if (!fresh && it->second != atom.arity())
        throw ArityError("relation " + atom.relation + " used with arities " + std::to_string(it->second) +
                         " and " + std::to_string(atom.arity()) + " at line " + std::to_string(line) +
                         ", column " + std::to_string(col));
      atoms.push_back(std::move(atom));
    } while (in.consume(','));
  }
  in.expect('.');
  if (!in.at_end()) in.fail("expected end of input after the rule");

  std::set<std::string> body_vars;
  for (const auto& a : atoms) body_vars.insert(a.args.begin(), a.args.end());
  for (const auto& v : free)
    if (!body_vars.count(v)) throw ParseError("head variable " + v + " does not occur in the body", head_line, head_col);
  return Query(std::move(atoms), std::move(free), head);
}

inline std::string serialize_query(const Query& q) {
  std::ostringstream out;
  out << q.head() << '(';
  for (std::size_t i = 0; i < q.free_vars().size(); ++i) out << (i ? "," : "") << q.free_vars()[i];
  out << ") :- ";
  for (std::size_t i = 0; i < q.atoms().size(); ++i) out << (i ? ", " : "") << q.atoms()[i].to_string();
  out << '.';
  return out.str();
}

}  // namespace cqsj
