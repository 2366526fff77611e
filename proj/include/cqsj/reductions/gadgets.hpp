#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqsj/database.hpp"
#include "cqsj/error.hpp"
#include "cqsj/fixtures.hpp"
#include "cqsj/query.hpp"
#include "cqsj/reductions/graph.hpp"
#include "cqsj/value.hpp"

namespace cqsj::reductions {

using Triangle = std::array<std::string, 3>;

/// Rotation of a cyclic triangle starting at its smallest vertex.
inline Triangle normalize_rotation(Triangle t) {
  while (t[0] > t[1] || t[0] > t[2]) t = {t[1], t[2], t[0]};
  return t;
}

namespace detail {

inline Value node(const std::string& data, const std::string& var) { return Value::pair(Value::atomic(data), var); }
inline Value bot() { return Value::atomic(kBottomToken); }
inline std::string joined(const std::string& a, const std::string& b) { return a + kJoiner + b; }

inline void require_loop_free(const Graph& g) {
  for (const auto& v : g.vertices) check_vertex_name(v);
  for (const auto& [a, b] : g.edges)
    if (a == b) throw SchemaError("gadget graphs must not contain self-loops (" + a + ")");
}

}  // namespace detail

/// Triangle gadget for the query FIG4_Q2 (variables a..h). Reading
/// x=g, y=f, z=h, u=a, v=e: the triangle g->f->h->g carries graph triangles,
/// a and e hang off it, and the bot-facts keep the b,c,d cycle satisfiable.
inline Database gadget_triangle_untangle2(const Graph& g) {
  using detail::bot;
  using detail::node;
  detail::require_loop_free(g);
  DatabaseBuilder b;
  for (const auto& [u, v] : g.edges) {
    b.add("R", {node(u, "g"), node(v, "f")});
    b.add("R", {node(u, "f"), node(v, "h")});
    b.add("R", {node(u, "h"), node(v, "g")});
    b.add("R", {node(kBottomToken, "a"), node(u, "g")});
    b.add("R", {node(v, "f"), node(kBottomToken, "e")});
  }
  b.add("R", {bot(), bot()});
  b.add("R", {node(kBottomToken, "a"), bot()});
  b.add("R", {bot(), node(kBottomToken, "e")});
  b.add("S", {bot(), bot(), bot()});
  return b.build();
}

/// Triangle gadget for Q_FIG1 = R(x,y),R(y,z),R(x,u),R(u,z),P(y). Per edge
/// (a,b) the facts R(<a,x>,<b,y>), R(<b,y>,<b,z>), R(<a,x>,<b,u>),
/// R(<a,u>,<b,z>) and P(<b,y>).
inline Database gadget_triangle_mirrorfig1(const Graph& g) {
  using detail::node;
  detail::require_loop_free(g);
  DatabaseBuilder b;
  b.declare("R", 2);
  b.declare("P", 1);
  for (const auto& [u, v] : g.edges) {
    b.add("R", {node(u, "x"), node(v, "y")});
    b.add("R", {node(v, "y"), node(v, "z")});
    b.add("R", {node(u, "x"), node(v, "u")});
    b.add("R", {node(u, "u"), node(v, "z")});
    b.add("P", {node(v, "y")});
  }
  return b.build();
}

/// Triangle gadget for SPIKE_Q1. Every node a gets the left half of the
/// cycle (x1..x5) plus R(<a,x1>,<a,x8>); every edge (a,b) links x5->x6,
/// x6->x7 and x8->x7 across a and b. The red predicate P holds exactly on
/// the nodes <a,x2>, as the construction states.
inline Database gadget_triangle_spike_q1(const Graph& g) {
  using detail::node;
  detail::require_loop_free(g);
  DatabaseBuilder b;
  b.declare("R", 2);
  b.declare("P", 1);
  for (const auto& a : g.vertices) {
    b.add("R", {node(a, "x1"), node(a, "x2")});
    b.add("R", {node(a, "x2"), node(a, "x3")});
    b.add("R", {node(a, "x4"), node(a, "x3")});
    b.add("R", {node(a, "x5"), node(a, "x4")});
    b.add("R", {node(a, "x1"), node(a, "x8")});
    b.add("P", {node(a, "x2")});
  }
  for (const auto& [u, v] : g.edges) {
    b.add("R", {node(u, "x5"), node(v, "x6")});
    b.add("R", {node(u, "x6"), node(v, "x7")});
    b.add("R", {node(u, "x8"), node(v, "x7")});
  }
  return b.build();
}

/// Unbalanced-triangle gadget for SPIKE_Q4 over a tripartite graph. U-nodes
/// carry x1->x2->x3<-x4 with P on <u,x2>; a U-V edge (u,v) becomes the node
/// <u#v,x5> pointing to <u,x4> and <v,x6>; a V-W edge is <v,x6>-><w,x7>; a
/// W-U edge (w,u) becomes <w#u,x8> with <u,x1>-><w#u,x8>-><w,x7>. Edges
/// running against the U->V->W->U orientation are ignored.
inline Database gadget_utd_spike_q4(const Graph& g) {
  using detail::joined;
  using detail::node;
  if (!g.parts) throw SchemaError("utd-spike-q4 needs a graph with #parts U V W");
  detail::require_loop_free(g);
  const auto& p = *g.parts;
  DatabaseBuilder b;
  b.declare("R", 2);
  b.declare("P", 1);
  for (const auto& u : p.U) {
    b.add("R", {node(u, "x1"), node(u, "x2")});
    b.add("R", {node(u, "x2"), node(u, "x3")});
    b.add("R", {node(u, "x4"), node(u, "x3")});
    b.add("P", {node(u, "x2")});
  }
  for (const auto& [s, t] : g.edges) {
    if (p.U.count(s) && p.V.count(t)) {
      b.add("R", {node(joined(s, t), "x5"), node(s, "x4")});
      b.add("R", {node(joined(s, t), "x5"), node(t, "x6")});
    } else if (p.V.count(s) && p.W.count(t)) {
      b.add("R", {node(s, "x6"), node(t, "x7")});
    } else if (p.W.count(s) && p.U.count(t)) {
      b.add("R", {node(t, "x1"), node(joined(s, t), "x8")});
      b.add("R", {node(joined(s, t), "x8"), node(s, "x7")});
    }
  }
  return b.build();
}

/// Result of decoding one gadget answer.
struct GadgetDecoded {
  std::string label;
  std::optional<Triangle> triangle;
};

/// A triangle gadget: its builder, target query, decoder, and the triangle
/// shape it detects (edges between roles 0, 1, 2).
struct Gadget {
  std::string kind;
  std::string fixture;
  std::function<Database(const Graph&)> build;
  std::function<GadgetDecoded(const Query&, const AnswerTuple&)> decode;
  std::vector<std::pair<int, int>> shape;
  bool cyclic = false;  // shape invariant under rotation
  bool needs_parts = false;
};

namespace detail {

using EdgeSet = std::set<std::pair<std::string, std::string>>;

inline const Value& at(const Query& q, const AnswerTuple& ans, const std::string& var) {
  const auto& fv = q.free_vars();
  for (std::size_t i = 0; i < fv.size(); ++i)
    if (fv[i] == var) return ans[i];
  throw SchemaError("gadget query lacks variable " + var);
}

/// Graph edges witnessed by the facts an answer uses. `edge_of` maps a fact
/// R(s,t) to the edge it was built from, if any.
inline EdgeSet used_edges(const Query& q, const AnswerTuple& ans,
                          const std::function<std::optional<std::pair<std::string, std::string>>(const Value&,
                                                                                              const Value&)>& edge_of) {
  EdgeSet out;
  for (const auto& atom : q.atoms()) {
    if (atom.relation != "R" || atom.arity() != 2) continue;
    if (auto e = edge_of(at(q, ans, atom.args[0]), at(q, ans, atom.args[1]))) out.insert(*e);
  }
  return out;
}

inline std::optional<Triangle> find_shape(const EdgeSet& edges, const std::vector<std::pair<int, int>>& shape) {
  std::set<std::string> nodes;
  for (const auto& [a, b] : edges) nodes.insert({a, b});
  for (const auto& a : nodes)
    for (const auto& b : nodes)
      for (const auto& c : nodes) {
        if (a == b || b == c || a == c) continue;
        const Triangle t{a, b, c};
        bool ok = true;
        for (const auto& [i, j] : shape) ok = ok && edges.count({t[i], t[j]});
        if (ok) return t;
      }
  return std::nullopt;
}

inline std::set<std::string> var_parts(const Query& q, const AnswerTuple& ans, const std::vector<std::string>& vars) {
  std::set<std::string> out;
  for (const auto& v : vars) out.insert(at(q, ans, v).var());
  return out;
}

const std::vector<std::pair<int, int>> kCycle = {{0, 1}, {1, 2}, {2, 0}};
const std::vector<std::pair<int, int>> kTransitive = {{0, 1}, {0, 2}, {2, 1}};
const std::vector<std::pair<int, int>> kSpike = {{0, 1}, {1, 2}, {0, 2}};

}  // namespace detail

/// TRIANGLE when g, f and h all carry graph nodes, BOT_FAMILY otherwise.
inline GadgetDecoded decode_untangle2(const Query& q, const AnswerTuple& ans) {
  GadgetDecoded out;
  bool triangle = true;
  for (const char* v : {"g", "f", "h"}) {
    const Value& val = detail::at(q, ans, v);
    triangle = triangle && val.is_pair() && val.data().text() != kBottomToken;
  }
  out.label = triangle ? "TRIANGLE" : "BOT_FAMILY";
  const auto edges = detail::used_edges(q, ans, [](const Value& s, const Value& t) {
    std::optional<std::pair<std::string, std::string>> e;
    if (!s.is_pair() || !t.is_pair() || s.data().text() == kBottomToken || t.data().text() == kBottomToken) return e;
    const std::string pv = s.var() + t.var();
    if (pv == "gf" || pv == "fh" || pv == "hg") e.emplace(s.data().text(), t.data().text());
    return e;
  });
  if (triangle) out.triangle = detail::find_shape(edges, detail::kCycle);
  return out;
}

/// TRIANGLE when u is mapped to itself, EDGE otherwise (u folded onto y).
inline GadgetDecoded decode_mirrorfig1(const Query& q, const AnswerTuple& ans) {
  GadgetDecoded out;
  out.label = detail::at(q, ans, "u").var() == "u" ? "TRIANGLE" : "EDGE";
  const auto edges = detail::used_edges(q, ans, [](const Value& s, const Value& t) {
    std::optional<std::pair<std::string, std::string>> e;
    const std::string pv = s.var() + "-" + t.var();
    if (pv == "x-y" || pv == "x-u" || pv == "u-z") e.emplace(s.data().text(), t.data().text());
    return e;
  });
  if (out.label == "TRIANGLE") out.triangle = detail::find_shape(edges, detail::kTransitive);
  return out;
}

/// Labels by the image of the cycle x1..x8: inside the left part x1..x5 is
/// NODE, inside the top part x1,x2,x3,x8,x7 is EDGE, anything else TRIANGLE.
inline GadgetDecoded decode_spike_q1(const Query& q, const AnswerTuple& ans) {
  static const std::set<std::string> left{"x1", "x2", "x3", "x4", "x5"};
  static const std::set<std::string> top{"x1", "x2", "x3", "x7", "x8"};
  const auto image = detail::var_parts(q, ans, {"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"});
  auto within = [&](const std::set<std::string>& part) {
    return std::includes(part.begin(), part.end(), image.begin(), image.end());
  };
  GadgetDecoded out;
  out.label = within(left) ? "NODE" : within(top) ? "EDGE" : "TRIANGLE";
  const auto edges = detail::used_edges(q, ans, [](const Value& s, const Value& t) {
    std::optional<std::pair<std::string, std::string>> e;
    const std::string pv = s.var() + "-" + t.var();
    if (pv == "x5-x6" || pv == "x6-x7" || pv == "x8-x7") e.emplace(s.data().text(), t.data().text());
    return e;
  });
  if (out.label == "TRIANGLE") out.triangle = detail::find_shape(edges, detail::kSpike);
  return out;
}

/// Four-way split on the image of the cycle x1..x8: everything is TRIANGLE,
/// only x1..x3 is NODE, x8 without x4 is EDGE_UW, x4 without x8 is EDGE_UV.
/// Any other image would break the case analysis and is reported as
/// UNCLASSIFIED.
inline GadgetDecoded decode_utd_spike_q4(const Query& q, const AnswerTuple& ans) {
  const auto image = detail::var_parts(q, ans, {"x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8"});
  const bool x4 = image.count("x4"), x8 = image.count("x8");
  GadgetDecoded out;
  if (image.size() == 8)
    out.label = "TRIANGLE";
  else if (image == std::set<std::string>{"x1", "x2", "x3"})
    out.label = "NODE";
  else if (x8 && !x4)
    out.label = "EDGE_UW";
  else if (x4 && !x8)
    out.label = "EDGE_UV";
  else
    out.label = "UNCLASSIFIED";
  if (out.label != "TRIANGLE") return out;
  // Composite nodes <s#t,..> name their edge directly.
  auto split = [](const std::string& token) {
    const auto k = token.find(kJoiner);
    return std::make_pair(token.substr(0, k), token.substr(k + 1));
  };
  const auto edges = detail::used_edges(q, ans, [&](const Value& s, const Value& t) {
    std::optional<std::pair<std::string, std::string>> e;
    const std::string pv = s.var() + "-" + t.var();
    if (pv == "x5-x4" || pv == "x5-x6") e = split(s.data().text());
    if (pv == "x6-x7") e.emplace(s.data().text(), t.data().text());
    if (pv == "x1-x8" || pv == "x8-x7") e = split((pv == "x1-x8" ? t : s).data().text());
    return e;
  });
  out.triangle = detail::find_shape(edges, detail::kCycle);
  return out;
}

inline const std::vector<Gadget>& triangle_gadgets() {
  static const std::vector<Gadget> list = {
      {"triangle-untangle2", "FIG4_Q2", gadget_triangle_untangle2, decode_untangle2, detail::kCycle, true, false},
      {"triangle-mirrorfig1", "Q_FIG1", gadget_triangle_mirrorfig1, decode_mirrorfig1, detail::kTransitive, false,
       false},
      {"triangle-spike-q1", "SPIKE_Q1", gadget_triangle_spike_q1, decode_spike_q1, detail::kSpike, false, false},
      {"utd-spike-q4", "SPIKE_Q4", gadget_utd_spike_q4, decode_utd_spike_q4, detail::kCycle, false, true},
  };
  return list;
}

inline const Gadget& gadget(const std::string& kind) {
  for (const auto& g : triangle_gadgets())
    if (g.kind == kind) return g;
  throw SchemaError("unknown gadget " + kind);
}

/// Triangles of g with the gadget's shape; cyclic shapes are normalized to
/// start at their smallest vertex, and UTD triangles must run U->V->W.
inline std::set<Triangle> true_triangles(const Gadget& gadget, const Graph& g) {
  std::set<Triangle> out;
  for (const auto& [a, b] : g.edges)
    for (const auto& c : g.vertices) {
      if (c == a || c == b) continue;
      const Triangle t{a, b, c};
      bool ok = true;
      for (const auto& [i, j] : gadget.shape) ok = ok && g.has_edge(t[i], t[j]);
      if (!ok) continue;
      if (gadget.needs_parts && !(g.parts && g.parts->U.count(a) && g.parts->V.count(b) && g.parts->W.count(c)))
        continue;
      out.insert(t);
    }
  if (!gadget.cyclic) return out;
  std::set<Triangle> normalized;
  for (const auto& t : out) normalized.insert(normalize_rotation(t));
  return normalized;
}

}  // namespace cqsj::reductions
