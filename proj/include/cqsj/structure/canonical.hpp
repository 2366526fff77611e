#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cqsj/query.hpp"

namespace cqsj::structure {

/// Canonical form of a query up to variable renaming: the free-variable set
/// is part of the form, their order is not.
struct CanonicalForm {
  std::string key;
  /// Original variable -> canonical name ("v0", "v1", ...).
  VarMap labeling;
};

namespace detail {

class Canonicalizer {
 public:
  explicit Canonicalizer(const Query& q) : names_(q.vars()) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names_.size(); ++i) index[names_[i]] = static_cast<int>(i);
    for (const auto& a : q.atoms()) {
      std::vector<int> args;
      for (const auto& v : a.args) args.push_back(index[v]);
      atoms_.push_back({a.relation, std::move(args)});
    }
    occurrences_.resize(names_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      for (std::size_t p = 0; p < atoms_[i].args.size(); ++p) occurrences_[atoms_[i].args[p]].push_back({i, p});
    free_.assign(names_.size(), false);
    for (const auto& v : q.free_vars()) free_[index[v]] = true;
  }

  CanonicalForm run() {
    std::vector<int> colour(names_.size());
    for (std::size_t v = 0; v < names_.size(); ++v) colour[v] = free_[v] ? 1 : 0;
    search(refine(colour));
    CanonicalForm out;
    out.key = best_key_;
    for (std::size_t v = 0; v < names_.size(); ++v) out.labeling[names_[v]] = "v" + std::to_string(best_[v]);
    return out;
  }

 private:
  struct IndexedAtom {
    std::string relation;
    std::vector<int> args;
  };

  // Replaces colours by ranks of isomorphism-invariant signatures until stable.
  std::vector<int> refine(std::vector<int> colour) const {
    using Signature = std::tuple<int, std::vector<std::tuple<std::string, std::size_t, std::vector<int>>>>;
    std::size_t classes = rank(colour);
    while (true) {
      std::vector<Signature> sig(names_.size());
      for (std::size_t v = 0; v < names_.size(); ++v) {
        std::get<0>(sig[v]) = colour[v];
        auto& occ = std::get<1>(sig[v]);
        for (auto [atom, pos] : occurrences_[v]) {
          std::vector<int> cols;
          for (int a : atoms_[atom].args) cols.push_back(colour[a]);
          occ.emplace_back(atoms_[atom].relation, pos, std::move(cols));
        }
        std::sort(occ.begin(), occ.end());
      }
      std::vector<Signature> sorted(sig);
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (std::size_t v = 0; v < names_.size(); ++v)
        colour[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
      if (sorted.size() == classes) return colour;
      classes = sorted.size();
    }
  }

  static std::size_t rank(std::vector<int>& colour) {
    std::vector<int> sorted(colour);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (int& c : colour) c = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin());
    return sorted.size();
  }

  std::string serialize(const std::vector<int>& label) const {
    std::vector<std::string> parts;
    for (const auto& a : atoms_) {
      std::string s = a.relation + "(";
      for (std::size_t i = 0; i < a.args.size(); ++i) s += (i ? "," : "") + std::string("v") + std::to_string(label[a.args[i]]);
      parts.push_back(s + ")");
    }
    std::sort(parts.begin(), parts.end());
    parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
    std::vector<int> free;
    for (std::size_t v = 0; v < names_.size(); ++v)
      if (free_[v]) free.push_back(label[v]);
    std::sort(free.begin(), free.end());
    std::string out = "{";
    for (std::size_t i = 0; i < free.size(); ++i) out += (i ? "," : "") + std::string("v") + std::to_string(free[i]);
    out += "}";
    for (const auto& p : parts) out += p;
    return out;
  }

  void search(const std::vector<int>& colour) {
    // First colour class with more than one member.
    std::map<int, std::vector<int>> cells;
    for (std::size_t v = 0; v < colour.size(); ++v) cells[colour[v]].push_back(static_cast<int>(v));
    const std::vector<int>* target = nullptr;
    for (const auto& [_, members] : cells)
      if (members.size() > 1) {
        target = &members;
        break;
      }
    if (!target) {
      std::string key = serialize(colour);
      if (best_.empty() || key < best_key_) {
        best_key_ = std::move(key);
        best_ = colour;
      }
      return;
    }
    const std::vector<int> members = *target;
    for (int v : members) {
      std::vector<int> next(colour.size());
      for (std::size_t u = 0; u < colour.size(); ++u) next[u] = 2 * colour[u] + (static_cast<int>(u) == v ? 0 : 1);
      rank(next);
      search(refine(next));
    }
  }

  std::vector<std::string> names_;
  std::vector<IndexedAtom> atoms_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> occurrences_;
  std::vector<bool> free_;
  std::vector<int> best_;
  std::string best_key_;
};

}  // namespace detail

inline CanonicalForm canonical_form(const Query& q) { return detail::Canonicalizer(q).run(); }

inline std::string canonical_key(const Query& q) { return canonical_form(q).key; }

inline bool isomorphic(const Query& a, const Query& b) { return canonical_key(a) == canonical_key(b); }

}  // namespace cqsj::structure
