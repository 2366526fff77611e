#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqsj/fixtures.hpp"
#include "cqsj/query.hpp"
#include "cqsj/structure/canonical.hpp"
#include "cqsj/structure/homomorphism.hpp"
#include "cqsj/structure/images.hpp"
#include "cqsj/structure/join_tree.hpp"

namespace cqsj::structure {

struct Verdict {
  std::string problem;
  std::string verdict;
  std::string assumption = "none";
  std::string citation;

  std::string to_string() const {
    std::string out = problem + ": " + verdict;
    if (assumption != "none" && !citation.empty())
      out += " (" + assumption + "; " + citation + ")";
    else if (assumption != "none")
      out += " (" + assumption + ")";
    else if (!citation.empty())
      out += " (" + citation + ")";
    return out;
  }
};

/// Queries whose status is settled by a query-specific argument rather
/// than a general criterion.
struct RegistryEntry {
  enum class Kind { bespoke_constant, bespoke_linear, hard_constant, hard_linear };
  std::string fixture;
  Kind kind;
  std::string assumption;
  std::string citation;
};

struct RegistryMatch {
  RegistryEntry entry;
  /// Input variable -> fixture variable.
  VarMap to_fixture;
};

inline const std::vector<RegistryEntry>& registry() {
  using K = RegistryEntry::Kind;
  static const std::vector<RegistryEntry> entries = {
      {"SPIKE_Q2", K::bespoke_constant, "none", "bespoke SPIKE_Q2"},
      {"SPIKE_Q3", K::bespoke_constant, "none", "bespoke SPIKE_Q3"},
      {"TWO_LOOPS", K::bespoke_linear, "none", "bespoke TWO_LOOPS; Example 4.4"},
      {"TWO_TRIANGLES", K::bespoke_linear, "none", "bespoke TWO_TRIANGLES; Example 4.5"},
      {"EX47", K::hard_linear, "sHyperclique", "Example 4.7 triangle encoding"},
      {"Q_FIG1", K::hard_constant, "sHyperclique", "Sec 5 triangle encoding"},
      {"SPIKE_Q1", K::hard_constant, "sHyperclique", "Sec 5.2 q1 triangle encoding"},
      {"SPIKE_Q4", K::hard_constant, "UTD", "Sec 5.2 q4 unbalanced triangle encoding"},
  };
  return entries;
}

inline std::optional<RegistryMatch> registry_lookup(const Query& q) {
  static const auto keyed = [] {
    std::map<std::string, std::pair<RegistryEntry, VarMap>> out;
    for (const auto& e : registry()) {
      const auto form = canonical_form(fixtures::query(e.fixture));
      VarMap from_canonical;
      for (const auto& [v, c] : form.labeling) from_canonical[c] = v;
      out.emplace(form.key, std::make_pair(e, from_canonical));
    }
    return out;
  }();
  const auto form = canonical_form(q);
  auto it = keyed.find(form.key);
  if (it == keyed.end()) return std::nullopt;
  RegistryMatch match{it->second.first, {}};
  for (const auto& [v, c] : form.labeling) match.to_fixture[v] = it->second.second.at(c);
  return match;
}

struct ClassificationReport {
  Query query;
  Query analyzed;  // the minimal form
  bool minimized = false;
  bool is_full = false, is_boolean = false, is_unary = false, is_binary = false;
  bool acyclic = false;
  std::optional<JoinTree> join_tree;
  bool free_connex = false;
  bool minimal = false;
  Query core;
  bool core_acyclic = false;
  std::optional<Query> full_core;
  std::vector<Image> images;
  bool nested_images = false;
  std::optional<MirrorWitness> mirror;
  UntangleOutcome untangle;
  std::optional<HardnessWitness> hardness;
  std::optional<RegistryMatch> registry;
  std::vector<Verdict> verdicts;

  const Verdict* verdict(const std::string& problem) const {
    for (const auto& v : verdicts)
      if (v.problem == problem) return &v;
    return nullptr;
  }

  std::string to_text() const;
  nlohmann::json to_json() const;
};

namespace detail {

inline Verdict make(std::string problem, std::string verdict, std::string assumption, std::string citation) {
  return Verdict{std::move(problem), std::move(verdict), std::move(assumption), std::move(citation)};
}

}  // namespace detail

inline ClassificationReport classify(const Query& input, const Limits& limits = Limits::from_env()) {
  using detail::make;
  ClassificationReport r;
  r.query = input;
  r.minimal = is_minimal(input, limits);
  const Query q = r.minimal ? input : minimal_form(input, limits);
  r.analyzed = q;
  r.minimized = !r.minimal;
  r.is_full = q.is_full();
  r.is_boolean = q.is_boolean();
  r.is_unary = q.arity() == 1;
  r.is_binary = q.arity() == 2;
  r.join_tree = gyo_acyclic(q);
  r.acyclic = r.join_tree.has_value();
  r.free_connex = r.acyclic && is_free_connex(q);
  r.core = core(q, limits);
  r.core_acyclic = is_acyclic(r.core);

  std::optional<Verdict> first, evaluation, linear, constant;

  if (!r.core_acyclic) {
    const std::string cite = "Thm 3.5";
    first = make("first-solution", "conditionally hard", "sHyperclique", cite);
    if (r.is_boolean || r.is_unary) evaluation = make("evaluation", "conditionally hard", "sHyperclique", cite);
    linear = make("linear-delay", "conditionally hard", "sHyperclique", cite);
    constant = make("constant-delay", "conditionally hard", "sHyperclique", cite);
  } else {
    first = make("first-solution", "linear time", "none", "acyclic core; Thm 3.5");
  }

  if (r.is_full && r.core_acyclic) {
    r.full_core = q.with_atoms(r.core.atoms());
    r.images = images(q, limits);
    r.nested_images = has_nested_images(r.images);
    r.mirror = is_mirror(q, limits);
    r.untangle = is_untangleable(q, 100000, limits);
    r.registry = registry_lookup(q);
  }

  if (r.core_acyclic && (r.is_boolean || r.is_unary)) {
    if (r.acyclic)
      evaluation = make("evaluation", "linear time", "none", "Thm 3.2");
    else
      evaluation = make("evaluation", "conditionally hard", "sHyperclique", "Thm 3.2");
  }

  if (r.core_acyclic) {
    if (r.free_connex) {
      constant = make("constant-delay", "constant delay", "none", "acyclic free-connex; Thm 2.2");
      linear = make("linear-delay", "linear delay", "none", "acyclic; Thm 2.2");
    } else if (r.is_boolean) {
      constant = make("constant-delay", evaluation->verdict == "linear time" ? "constant delay" : "conditionally hard",
                      evaluation->assumption, evaluation->citation);
      linear = make("linear-delay", constant->verdict == "constant delay" ? "linear delay" : "conditionally hard",
                    evaluation->assumption, evaluation->citation);
    } else if (r.is_unary && !r.acyclic) {
      constant = make("constant-delay", "conditionally hard", "sHyperclique", "Thm 3.2");
      linear = make("linear-delay", "conditionally hard", "sHyperclique", "Thm 3.2");
    } else if (r.is_binary && !r.is_full) {
      constant = make("constant-delay", "conditionally hard", "BMM+Hyperclique", "Thm 3.4");
    }
    if (!linear && r.acyclic) linear = make("linear-delay", "linear delay", "none", "acyclic; Thm 2.2");
  }

  if (r.is_full && r.core_acyclic) {
    if (r.is_binary && !r.free_connex && !constant)
      constant = make("constant-delay", "conditionally hard", "BMM+Hyperclique", "Thm 3.4");
    if (!constant && r.mirror) constant = make("constant-delay", "constant delay", "none", "mirror; Prop 5.2");
    if (!linear && r.untangle.status == Tristate::yes)
      linear = make("linear-delay", "linear delay", "none", "untangleable; Prop 4.3");
    if (r.registry) {
      const auto& e = r.registry->entry;
      using K = RegistryEntry::Kind;
      if (e.kind == K::bespoke_constant && !constant) constant = make("constant-delay", "constant delay", "none", e.citation);
      if (e.kind == K::bespoke_linear && !linear) linear = make("linear-delay", "linear delay", "none", e.citation);
    }
    if (!linear && r.nested_images && r.untangle.status == Tristate::no)
      linear = make("linear-delay", "conditionally hard", "sHyperclique",
                    "nested images, not untangleable (no within progressing search); Thm 4.8");
    if (!linear) {
      r.hardness = hardness_transfer(q, limits);
      if (r.hardness) linear = make("linear-delay", "conditionally hard", "sHyperclique", "hardness transfer; Prop 4.7");
    }
    if (r.registry) {
      const auto& e = r.registry->entry;
      using K = RegistryEntry::Kind;
      if (e.kind == K::hard_linear && !linear) linear = make("linear-delay", "conditionally hard", e.assumption, e.citation);
      if (e.kind == K::hard_constant && !constant)
        constant = make("constant-delay", "conditionally hard", e.assumption, e.citation);
    }
  }

  if (linear && linear->verdict == "conditionally hard" && !constant)
    constant = make("constant-delay", "conditionally hard", linear->assumption, linear->citation);
  if (constant && constant->verdict == "constant delay" && !linear)
    linear = make("linear-delay", "linear delay", "none", constant->citation);
  if (!linear) linear = make("linear-delay", "unknown", "none", "");
  if (!constant) constant = make("constant-delay", "unknown", "none", "");

  Verdict summary;
  if (constant->verdict == "constant delay") {
    summary = make("enumeration", "constant delay", constant->assumption, constant->citation);
  } else if (linear->verdict == "conditionally hard") {
    summary = make("enumeration", "conditionally hard", linear->assumption, linear->citation);
  } else if (linear->verdict == "linear delay" && constant->verdict == "conditionally hard") {
    summary = make("enumeration", "linear delay", constant->assumption,
                   linear->citation + "; constant delay conditionally hard: " + constant->citation);
  } else if (linear->verdict == "linear delay") {
    summary = make("enumeration", "unknown", "none", linear->citation + "; constant delay open");
  } else {
    summary = make("enumeration", "unknown", "none", "");
  }

  r.verdicts.push_back(*first);
  if (evaluation) r.verdicts.push_back(*evaluation);
  r.verdicts.push_back(*linear);
  r.verdicts.push_back(*constant);
  r.verdicts.push_back(summary);
  return r;
}

inline std::string ClassificationReport::to_text() const {
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  std::string out;
  out += "query: " + serialize_query(query) + "\n";
  if (minimized) out += "minimized to: " + serialize_query(analyzed) + "\n";
  out += std::string("full: ") + yn(is_full) + ", boolean: " + yn(is_boolean) + ", unary: " + yn(is_unary) +
         ", binary: " + yn(is_binary) + "\n";
  out += std::string("acyclic: ") + yn(acyclic) + ", free-connex: " + yn(free_connex) + ", minimal: " + yn(minimal) +
         "\n";
  out += "core: " + serialize_query(core) + (core_acyclic ? " (acyclic)" : " (cyclic)") + "\n";
  if (full_core) out += "full-core: " + serialize_query(*full_core) + "\n";
  if (is_full && core_acyclic) {
    out += "images: " + std::to_string(images.size()) + (nested_images ? " (nested)" : "") + "\n";
    out += std::string("mirror: ") + (mirror ? serialize_query(mirror->image) : "no") + "\n";
    const char* status = untangle.status == Tristate::yes  ? "yes"
                         : untangle.status == Tristate::no ? "no (within progressing search)"
                                                           : "unknown (budget exhausted)";
    out += std::string("untangleable: ") + status + "\n";
    if (hardness)
      out += "hardness transfer: " + serialize_query(hardness->image) + " -> " + serialize_query(hardness->untangled) +
             "\n";
    if (registry) out += "registered: " + registry->entry.fixture + "\n";
  }
  for (const auto& v : verdicts) out += v.to_string() + "\n";
  return out;
}

inline nlohmann::json ClassificationReport::to_json() const {
  using nlohmann::json;
  json j;
  j["query"] = serialize_query(query);
  j["minimized"] = minimized;
  j["analyzed"] = serialize_query(analyzed);
  j["is_full"] = is_full;
  j["is_boolean"] = is_boolean;
  j["is_unary"] = is_unary;
  j["is_binary"] = is_binary;
  j["acyclic"] = acyclic;
  if (join_tree) {
    json edges = json::array();
    for (std::size_t i = 0; i < join_tree->nodes.size(); ++i)
      if (join_tree->parent[i])
        edges.push_back({join_tree->nodes[i].to_string(), join_tree->nodes[*join_tree->parent[i]].to_string()});
    j["join_tree"] = {{"root", join_tree->nodes.empty() ? "" : join_tree->nodes[join_tree->root].to_string()},
                      {"edges", edges}};
  } else {
    j["join_tree"] = nullptr;
  }
  j["free_connex"] = free_connex;
  j["minimal"] = minimal;
  j["core"] = serialize_query(core);
  j["core_acyclic"] = core_acyclic;
  j["full_core"] = full_core ? json(serialize_query(*full_core)) : json(nullptr);
  json imgs = json::array();
  for (const auto& im : images) imgs.push_back(serialize_query(im.query));
  j["images"] = imgs;
  j["nested_images"] = nested_images;
  if (mirror) {
    j["mirror"] = {{"image", serialize_query(mirror->image)}, {"iso", mirror->iso}};
  } else {
    j["mirror"] = nullptr;
  }
  if (is_full && core_acyclic) {
    json u;
    u["status"] = untangle.status == Tristate::yes ? "yes" : untangle.status == Tristate::no ? "no" : "unknown";
    if (untangle.witness) {
      json steps = json::array();
      for (const auto& s : untangle.witness->steps)
        steps.push_back({{"query", serialize_query(s.query)},
                         {"image", serialize_query(s.image)},
                         {"result", serialize_query(s.result)},
                         {"kind", std::string(1, s.kind)}});
      u["steps"] = steps;
      u["base"] = serialize_query(untangle.witness->base);
    }
    j["untangleable"] = u;
  } else {
    j["untangleable"] = nullptr;
  }
  j["hardness_transfer"] = hardness ? json{{"image", serialize_query(hardness->image)},
                                           {"untangled", serialize_query(hardness->untangled)}}
                                    : json(nullptr);
  j["registry"] = registry ? json(registry->entry.fixture) : json(nullptr);
  json vs = json::array();
  for (const auto& v : verdicts)
    vs.push_back({{"problem", v.problem}, {"verdict", v.verdict}, {"assumption", v.assumption}, {"citation", v.citation}});
  j["verdicts"] = vs;
  return j;
}

}  // namespace cqsj::structure
