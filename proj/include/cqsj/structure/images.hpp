#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqsj/error.hpp"
#include "cqsj/query.hpp"
#include "cqsj/structure/canonical.hpp"
#include "cqsj/structure/homomorphism.hpp"
#include "cqsj/structure/join_tree.hpp"

namespace cqsj::structure {

/// Subquery induced by the range of one or more endomorphisms.
struct Image {
  Query query;
  std::vector<VarMap> witnesses;
};

inline void require_full(const Query& q, const char* op) {
  if (!q.is_full()) throw SchemaError(std::string(op) + " requires a full query");
}

/// All images of a full query, largest first (ties by atom list).
inline std::vector<Image> images(const Query& q, const Limits& limits = Limits::from_env()) {
  require_full(q, "images");
  std::map<std::vector<Atom>, std::vector<VarMap>> by_atoms;
  for (auto& h : endomorphisms(q, false, limits)) by_atoms[image_atoms(q, h)].push_back(std::move(h));
  std::vector<Image> out;
  for (auto& [atoms, maps] : by_atoms) out.push_back(Image{q.with_atoms(atoms), std::move(maps)});
  std::stable_sort(out.begin(), out.end(), [](const Image& a, const Image& b) {
    return a.query.atoms().size() > b.query.atoms().size();
  });
  return out;
}

/// True when some endomorphism of q has exactly `sub`'s atoms as its range.
inline bool is_image_of(const Query& q, const Query& sub) {
  const auto target = sub.atom_set();
  const auto q_atoms = q.atom_set();
  for (const auto& a : target)
    if (!q_atoms.count(a)) return false;
  const std::vector<Atom> to(target.begin(), target.end());
  bool found = false;
  for_each_homomorphism(q.atoms(), to, {}, [&](const VarMap& h) {
    std::set<Atom> hit;
    for (const auto& a : q.atoms()) hit.insert(apply(h, a));
    found = hit == target;
    return !found;
  });
  return found;
}

/// Where an untangled atom came from: its original relation, the dropped
/// positions and the image variables sitting at them.
struct UntangledAtom {
  Atom atom;
  std::string source_relation;
  std::vector<std::size_t> dropped;
  std::vector<std::string> shared;
};

struct UntanglingResult {
  Query query;
  std::vector<UntangledAtom> provenance;
};

/// Removes I's atoms from q and rewrites each remaining atom R(z) into
/// R__S(z') with the positions S holding variables of I projected away.
/// Two atoms with the same (R, S) but different variables at S get
/// suffixed symbols, since they filter on different values.
inline UntanglingResult untangling_step_detailed(const Query& q, const Query& image) {
  const auto image_atoms_set = image.atom_set();
  const auto image_vars = image.var_set();
  UntanglingResult out;
  std::map<std::pair<std::string, std::vector<std::size_t>>, std::vector<std::vector<std::string>>> variants;
  std::vector<Atom> atoms;
  for (const auto& a : q.atoms()) {
    if (image_atoms_set.count(a)) continue;
    UntangledAtom u;
    u.source_relation = a.relation;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (image_vars.count(a.args[i])) {
        u.dropped.push_back(i);
        u.shared.push_back(a.args[i]);
      } else {
        kept.push_back(a.args[i]);
      }
    }
    std::string name = a.relation;
    if (!u.dropped.empty()) {
      name += "__";
      for (std::size_t i : u.dropped) name += std::to_string(i);
      auto& seen = variants[{a.relation, u.dropped}];
      auto it = std::find(seen.begin(), seen.end(), u.shared);
      if (it == seen.end()) {
        seen.push_back(u.shared);
        it = seen.end() - 1;
      }
      if (it != seen.begin()) name += "_" + std::to_string(it - seen.begin() + 1);
    }
    u.atom = Atom{name, kept};
    atoms.push_back(u.atom);
    out.provenance.push_back(std::move(u));
  }
  std::vector<std::string> free;
  std::set<std::string> seen_vars;
  for (const auto& a : atoms)
    for (const auto& v : a.args)
      if (seen_vars.insert(v).second) free.push_back(v);
  out.query = Query(std::move(atoms), std::move(free), q.head());
  // Duplicate rewritten atoms collapse in the query; keep provenance aligned.
  std::set<Atom> kept;
  std::vector<UntangledAtom> aligned;
  for (auto& u : out.provenance)
    if (kept.insert(u.atom).second) aligned.push_back(std::move(u));
  out.provenance = std::move(aligned);
  return out;
}

inline Query untangling_step(const Query& q, const Query& image) { return untangling_step_detailed(q, image).query; }

/// One link of an untangling sequence. Kind 'A': the predecessor is the
/// image and the result is acyclic. Kind 'B': the image is acyclic and the
/// predecessor is the result.
struct UntanglingStep {
  Query query;
  Query image;
  Query result;
  char kind = 'A';

  const Query& predecessor() const { return kind == 'A' ? image : result; }
};

/// Steps from q (first) down to the acyclic base (last step's predecessor).
struct UntanglingWitness {
  std::vector<UntanglingStep> steps;
  Query base;
};

/// Re-checks every step against the definition. Throws InvalidWitness.
inline void validate_witness(const Query& q, const UntanglingWitness& w) {
  if (!is_acyclic(w.base)) throw InvalidWitness("base query is cyclic");
  const Query* current = &q;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const auto& s = w.steps[i];
    const std::string where = "step " + std::to_string(i) + ": ";
    if (!(s.query == *current)) throw InvalidWitness(where + "query does not continue the sequence");
    if (!s.query.is_full()) throw InvalidWitness(where + "query is not full");
    if (!is_image_of(s.query, s.image)) throw InvalidWitness(where + "image is not an image of the query");
    if (!(untangling_step(s.query, s.image) == s.result)) throw InvalidWitness(where + "result does not match");
    if (s.kind == 'A') {
      if (!is_acyclic(s.result)) throw InvalidWitness(where + "result is cyclic");
    } else if (s.kind == 'B') {
      if (!is_acyclic(s.image)) throw InvalidWitness(where + "image is cyclic");
    } else {
      throw InvalidWitness(where + "unknown step kind");
    }
    current = &s.predecessor();
  }
  if (!(*current == w.base)) throw InvalidWitness("sequence does not end at the base");
}

enum class Tristate { yes, no, unknown };

struct UntangleOutcome {
  Tristate status = Tristate::unknown;
  std::optional<UntanglingWitness> witness;
};

namespace detail {

class UntangleSearch {
 public:
  UntangleSearch(std::size_t budget, const Limits& limits) : budget_(budget), limits_(limits) {}

  // Steps leading from q to an acyclic base, or nullopt.
  std::optional<std::vector<UntanglingStep>> solve(const Query& q) {
    if (is_acyclic(q)) return std::vector<UntanglingStep>{};
    const std::string key = canonical_key(q);
    if (failed_.count(key)) return std::nullopt;
    if (calls_++ >= budget_) {
      exhausted_ = true;
      return std::nullopt;
    }
    for (const auto& image : images(q, limits_)) {
      if (image.query.atoms().size() == q.atoms().size()) continue;
      const Query result = untangling_step(q, image.query);
      if (is_acyclic(result)) {
        if (auto rest = solve(image.query)) return prepend({q, image.query, result, 'A'}, std::move(*rest));
      }
      if (is_acyclic(image.query)) {
        if (auto rest = solve(result)) return prepend({q, image.query, result, 'B'}, std::move(*rest));
      }
    }
    if (!exhausted_) failed_.insert(key);
    return std::nullopt;
  }

  bool exhausted() const { return exhausted_; }

 private:
  static std::vector<UntanglingStep> prepend(UntanglingStep step, std::vector<UntanglingStep> rest) {
    rest.insert(rest.begin(), std::move(step));
    return rest;
  }

  std::size_t budget_;
  Limits limits_;
  std::size_t calls_ = 0;
  bool exhausted_ = false;
  std::set<std::string> failed_;
};

}  // namespace detail

/// Searches for an untangling sequence. Every step strictly shrinks the
/// atom count, so "no" means the search space was exhausted.
inline UntangleOutcome is_untangleable(const Query& q, std::size_t budget = 100000,
                                       const Limits& limits = Limits::from_env()) {
  require_full(q, "is_untangleable");
  check_limits(q, limits);
  detail::UntangleSearch search(budget, limits);
  auto steps = search.solve(q);
  UntangleOutcome out;
  if (steps) {
    UntanglingWitness w;
    w.base = steps->empty() ? q : steps->back().predecessor();
    w.steps = std::move(*steps);
    validate_witness(q, w);
    out.status = Tristate::yes;
    out.witness = std::move(w);
  } else {
    out.status = search.exhausted() ? Tristate::unknown : Tristate::no;
  }
  return out;
}

/// Acyclic image plus an isomorphism from the remaining atoms onto it.
struct MirrorWitness {
  Query image;
  /// Variables of the non-image atoms -> variables of the image.
  VarMap iso;
};

inline std::vector<Atom> atoms_outside(const Query& q, const Query& image) {
  const auto inside = image.atom_set();
  std::vector<Atom> out;
  for (const auto& a : q.atoms())
    if (!inside.count(a)) out.push_back(a);
  return out;
}

inline void validate_mirror(const Query& q, const MirrorWitness& w) {
  if (!is_image_of(q, w.image)) throw InvalidWitness("mirror image is not an image of the query");
  if (!is_acyclic(w.image)) throw InvalidWitness("mirror image is cyclic");
  const auto rest = atoms_outside(q, w.image);
  const auto image_vars = w.image.var_set();
  std::set<std::string> rest_vars;
  for (const auto& a : rest) rest_vars.insert(a.args.begin(), a.args.end());
  if (!is_injective(w.iso)) throw InvalidWitness("mirror map is not injective");
  for (const auto& v : rest_vars) {
    auto it = w.iso.find(v);
    if (it == w.iso.end()) throw InvalidWitness("mirror map misses variable " + v);
    if (image_vars.count(v) && it->second != v) throw InvalidWitness("mirror map moves shared variable " + v);
  }
  if (rest_vars.size() != image_vars.size()) throw InvalidWitness("mirror halves differ in size");
  std::set<Atom> mapped;
  for (const auto& a : rest) mapped.insert(apply(w.iso, a));
  if (mapped != w.image.atom_set() || rest.size() != w.image.atoms().size())
    throw InvalidWitness("mirror map does not carry the remaining atoms onto the image");
}

/// Exhaustive search over images and shared-variable-fixing bijections.
inline std::optional<MirrorWitness> is_mirror(const Query& q, const Limits& limits = Limits::from_env()) {
  require_full(q, "is_mirror");
  for (const auto& image : images(q, limits)) {
    const Query& I = image.query;
    if (I.atoms().size() * 2 != q.atoms().size() || !is_acyclic(I)) continue;
    const auto rest = atoms_outside(q, I);
    const auto image_vars = I.var_set();
    std::set<std::string> rest_vars;
    for (const auto& a : rest) rest_vars.insert(a.args.begin(), a.args.end());
    if (rest_vars.size() != image_vars.size()) continue;
    VarMap fixed;
    for (const auto& v : rest_vars)
      if (image_vars.count(v)) fixed[v] = v;
    const std::vector<Atom> target = I.atoms();
    std::optional<MirrorWitness> found;
    for_each_homomorphism(rest, target, fixed, [&](const VarMap& h) {
      if (!is_injective(h)) return true;
      std::set<Atom> hit;
      for (const auto& a : rest) hit.insert(apply(h, a));
      if (hit != I.atom_set()) return true;
      found = MirrorWitness{I, h};
      return false;
    });
    if (found) return found;
  }
  return std::nullopt;
}

/// Any two images are comparable under atom-set inclusion.
inline bool has_nested_images(const std::vector<Image>& imgs) {
  for (std::size_t i = 0; i < imgs.size(); ++i)
    for (std::size_t j = i + 1; j < imgs.size(); ++j) {
      const auto a = imgs[i].query.atom_set(), b = imgs[j].query.atom_set();
      const bool a_in_b = std::includes(b.begin(), b.end(), a.begin(), a.end());
      const bool b_in_a = std::includes(a.begin(), a.end(), b.begin(), b.end());
      if (!a_in_b && !b_in_a) return false;
    }
  return true;
}

struct HardnessWitness {
  Query image;
  Query untangled;
};

/// An image I whose untangling q' has a cyclic core while every image of q
/// holds either none or all of q''s variables.
inline std::optional<HardnessWitness> hardness_transfer(const Query& q, const Limits& limits = Limits::from_env()) {
  require_full(q, "hardness_transfer");
  const auto imgs = images(q, limits);
  for (const auto& image : imgs) {
    const Query result = untangling_step(q, image.query);
    if (result.atoms().empty()) continue;
    if (is_acyclic(core(result, limits))) continue;
    const auto vars = result.var_set();
    bool ok = true;
    for (const auto& other : imgs) {
      const auto jv = other.query.var_set();
      std::size_t inside = 0;
      for (const auto& v : vars) inside += jv.count(v);
      if (inside != 0 && inside != vars.size()) {
        ok = false;
        break;
      }
    }
    if (ok) return HardnessWitness{image.query, result};
  }
  return std::nullopt;
}

}  // namespace cqsj::structure
