#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cqsj/error.hpp"
#include "cqsj/scanner.hpp"
#include "cqsj/value.hpp"

namespace cqsj {

using ValueId = std::uint32_t;

/// Interned domain. Ids are assigned in sorted value order at build time, so
/// iteration order over ids is deterministic.
class Dictionary {
 public:
  ValueId intern(const Value& v) {
    auto [it, fresh] = index_.emplace(v.text(), static_cast<ValueId>(values_.size()));
    if (fresh) values_.push_back(v);
    return it->second;
  }

  std::optional<ValueId> find(const Value& v) const {
    auto it = index_.find(v.text());
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Value& value(ValueId id) const { return values_[id]; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<Value> values_;
  std::unordered_map<std::string, ValueId> index_;
};

/// Tuples of one relation, stored row-major, sorted and duplicate-free.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t arity) : arity_(arity) {}

  /// Takes unsorted rows (flat) and normalizes them.
  Relation(std::size_t arity, std::vector<ValueId> flat) : arity_(arity) {
    if (arity_ == 0) {
      nullary_rows_ = flat.empty() ? 0 : 1;
      return;
    }
    std::vector<std::span<const ValueId>> rows;
    for (std::size_t i = 0; i < flat.size(); i += arity_) rows.emplace_back(flat.data() + i, arity_);
    std::sort(rows.begin(), rows.end(), [](auto a, auto b) {
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    });
    auto last = std::unique(rows.begin(), rows.end(),
                            [](auto a, auto b) { return std::equal(a.begin(), a.end(), b.begin()); });
    data_.reserve(static_cast<std::size_t>(last - rows.begin()) * arity_);
    for (auto it = rows.begin(); it != last; ++it) data_.insert(data_.end(), it->begin(), it->end());
  }

  /// A nullary relation is either {()} or {}.
  static Relation nullary(bool holds) {
    Relation r(0);
    r.nullary_rows_ = holds ? 1 : 0;
    return r;
  }

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return arity_ == 0 ? nullary_rows_ : data_.size() / arity_; }
  bool empty() const { return size() == 0; }
  std::span<const ValueId> row(std::size_t i) const { return {data_.data() + i * arity_, arity_}; }

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t arity_ = 0;
  std::vector<ValueId> data_;
  std::size_t nullary_rows_ = 0;
};

/// A finite relational instance. Immutable once built; derived databases
/// (filters, projections, copies) share the value dictionary.
class Database {
 public:
  Database() : dict_(std::make_shared<Dictionary>()) {}

  Database(std::shared_ptr<const Dictionary> dict, std::map<std::string, Relation> relations)
      : dict_(std::move(dict)), relations_(std::move(relations)) {}

  const std::map<std::string, Relation>& relations() const { return relations_; }
  const std::shared_ptr<const Dictionary>& dictionary() const { return dict_; }

  const Relation* find(const std::string& name) const {
    auto it = relations_.find(name);
    return it == relations_.end() ? nullptr : &it->second;
  }

  const Value& value(ValueId id) const { return dict_->value(id); }
  std::optional<ValueId> id_of(const Value& v) const { return dict_->find(v); }

  /// Total number of facts.
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [_, r] : relations_) n += r.size();
    return n;
  }

  std::set<Value> domain() const {
    std::set<Value> out;
    for (const auto& [_, r] : relations_)
      for (std::size_t i = 0; i < r.size(); ++i)
        for (ValueId id : r.row(i)) out.insert(value(id));
    return out;
  }

  using Fact = std::pair<std::string, std::vector<Value>>;

  std::set<Fact> facts() const {
    std::set<Fact> out;
    for (const auto& [name, r] : relations_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        std::vector<Value> row;
        for (ValueId id : r.row(i)) row.push_back(value(id));
        out.emplace(name, std::move(row));
      }
    }
    return out;
  }

  /// Fact-set equality, independent of dictionaries.
  friend bool operator==(const Database& a, const Database& b) { return a.facts() == b.facts(); }

 private:
  std::shared_ptr<const Dictionary> dict_;
  std::map<std::string, Relation> relations_;
};

/// Accumulates facts, then builds a Database with sorted value ids.
class DatabaseBuilder {
 public:
  /// Declares an (initially empty) relation.
  void declare(const std::string& relation, std::size_t arity) {
    auto [it, fresh] = arity_.emplace(relation, arity);
    if (!fresh && it->second != arity)
      throw ArityError("relation " + relation + " used with arities " + std::to_string(it->second) + " and " +
                       std::to_string(arity));
    rows_[relation];
  }

  void add(const std::string& relation, std::vector<Value> row) {
    declare(relation, row.size());
    rows_[relation].insert(std::move(row));
  }

  Database build() const {
    std::set<Value> domain;
    for (const auto& [_, rows] : rows_)
      for (const auto& row : rows) domain.insert(row.begin(), row.end());
    auto dict = std::make_shared<Dictionary>();
    for (const auto& v : domain) dict->intern(v);
    std::map<std::string, Relation> relations;
    for (const auto& [name, rows] : rows_) {
      const std::size_t arity = arity_.at(name);
      if (arity == 0) {
        relations.emplace(name, Relation::nullary(!rows.empty()));
        continue;
      }
      std::vector<ValueId> flat;
      for (const auto& row : rows)
        for (const auto& v : row) flat.push_back(*dict->find(v));
      relations.emplace(name, Relation(arity, std::move(flat)));
    }
    return Database(std::move(dict), std::move(relations));
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [_, rows] : rows_) n += rows.size();
    return n;
  }

 private:
  std::map<std::string, std::size_t> arity_;
  std::map<std::string, std::set<std::vector<Value>>> rows_;
};

namespace detail {

inline Value parse_value(Scanner& in) {
  if (in.lookahead("pair(")) {
    in.expect("pair(");
    Value data = parse_value(in);
    in.expect(',');
    std::string var = in.word(is_lower, is_ident_rest, "variable");
    in.expect(')');
    return Value::pair(data, var);
  }
  return Value::atomic(in.word(is_token_char, is_token_char, "value"));
}

}  // namespace detail

/// Parses a sequence of facts `R(v1,...,vk).`; duplicates collapse.
inline Database parse_database(std::string_view text) {
  detail::Scanner in(text);
  DatabaseBuilder builder;
  while (!in.at_end()) {
    const std::size_t line = in.line(), col = in.column();
    std::string relation = in.word(detail::is_upper, detail::is_ident_rest, "relation name");
    std::vector<Value> row;
    in.expect('(');
    if (!in.consume(')')) {
      do {
        row.push_back(detail::parse_value(in));
      } while (in.consume(','));
      in.expect(')');
    }
    in.expect('.');
    try {
      builder.add(relation, std::move(row));
    } catch (const ArityError& e) {
      throw ArityError(std::string(e.what()) + " at line " + std::to_string(line) + ", column " +
                       std::to_string(col));
    }
  }
  return builder.build();
}

/// One fact per line, relations in name order, rows in value order.
inline std::string serialize_database(const Database& db) {
  std::ostringstream out;
  for (const auto& [name, row] : db.facts()) {
    out << name << '(';
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i].text();
    out << ").\n";
  }
  return out.str();
}

/// An answer as domain values, aligned with a query's free variables.
using AnswerTuple = std::vector<Value>;

inline std::string serialize_answer(const AnswerTuple& answer) {
  std::string out;
  for (std::size_t i = 0; i < answer.size(); ++i) {
    if (i) out += ", ";
    out += answer[i].text();
  }
  return out;
}

inline std::string serialize_answers(const std::vector<AnswerTuple>& answers) {
  std::string out;
  for (const auto& a : answers) out += serialize_answer(a) + "\n";
  return out;
}

inline AnswerTuple to_values(const Database& db, std::span<const ValueId> ids) {
  AnswerTuple out;
  out.reserve(ids.size());
  for (ValueId id : ids) out.push_back(db.value(id));
  return out;
}

}  // namespace cqsj
