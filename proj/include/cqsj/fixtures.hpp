#pragma once

#include <string>
#include <vector>

#include "cqsj/query.hpp"

// Named queries from the literature on self-join enumeration, used by the
// classifier registry, the tests and the CLI data files.
namespace cqsj::fixtures {

struct Fixture {
  std::string name;
  std::string text;
  Query query() const { return parse_query(text); }
};

inline const std::vector<Fixture>& all() {
  static const std::vector<Fixture> list = {
      {"Q_FIG1", "Q(x,y,z,u) :- R(x,y), R(y,z), R(x,u), R(u,z), P(y)."},
      {"Q_DIAMOND", "Q(x,u,y,v) :- R(x,u), R(u,y), R(x,v), R(v,y)."},
      {"Q_REV", "Q(x,u,y,v) :- R(x,u), R(u,y), R(x,v), R(y,v)."},
      {"Q_PATH2F", "Q(x,y,z) :- R(x,y), R(y,z)."},
      {"Q_PATH2P", "Q(x,z) :- R(x,y), S(y,z)."},
      {"Q_TRIANGLE", "Q(x,y,z) :- R(x,y), R(y,z), R(z,x)."},
      {"Q_TRIANGLE3", "Q() :- R(x,y), S(y,z), T(x,z)."},
      {"Q_BLOWFISH",
       "Q(x1,x2,x3,x4,x5,x6,x7,x8) :- R(x1,x2), R(x2,x3), R(x4,x3), R(x5,x4), R(x5,x6), R(x6,x7), R(x8,x7), "
       "R(x1,x8), P(x2)."},
      {"FIG3_Q1",
       "Q(a,b,c,d,e,f,g,h,i) :- R(a,b), R(b,c), R(c,d), R(d,b), S(b,c,d), R(c,e), R(f,e), R(g,f), R(f,h), "
       "R(h,g), R(a,g), R(i,e)."},
      {"FIG4_Q2",
       "Q(a,b,c,d,e,f,g,h) :- R(a,b), R(b,c), R(c,d), R(d,b), S(b,c,d), R(c,e), R(f,e), R(g,f), R(f,h), "
       "R(h,g), R(a,g)."},
      {"FIG5",
       "Q(a,b,c,d,e,f,g) :- R(a,b), R(a,c), R(c,b), S(a,b,c), R(a,d), R(d,b), R(e,f), R(e,d), R(d,f), R(e,g), "
       "R(g,f)."},
      {"EX47",
       "Q(a,g,h,b,d,e,c,f) :- S(a,g,h), R(a,g), R(g,h), R(h,a), R(a,b), R(b,d), R(d,e), R(e,b), R(a,c), R(c,d), "
       "R(d,f), R(f,c)."},
      {"EX48", "Q(a,b,c,d,e) :- R(a,b), R(b,c), R(c,d), R(d,a), R(e,a), R(e,c), R(d,d), R(e,e)."},
      {"TWO_LOOPS",
       "Q(a1,b1,c,a2,b2) :- R(a1,a1), R(a1,b1), R(b1,c), R(c,a1), R(a2,a2), R(a2,c), R(c,b2), R(b2,a2)."},
      {"TWO_TRIANGLES", "Q(a1,b,c,a2) :- R(b,c), R(a1,a1), R(c,a1), R(a1,b), R(a2,a2), R(a2,b), R(a2,c)."},
      {"SPIKE_Q1",
       "Q(x1,x2,x3,x4,x5,x6,x7,x8) :- R(x1,x2), R(x2,x3), R(x4,x3), R(x5,x4), R(x5,x6), R(x6,x7), R(x8,x7), "
       "R(x1,x8), P(x2)."},
      {"SPIKE_Q2",
       "Q(x1,x2,x3,x4,x5,x6,x7,x8,s6,s4) :- R(x1,x2), R(x2,x3), R(x4,x3), R(x5,x4), R(x5,x6), R(x6,x7), "
       "R(x8,x7), R(x1,x8), P(x2), R(x5,s6), R(s4,x7)."},
      {"SPIKE_Q3",
       "Q(x1,x2,x3,x4,x5,x6,x7,x8,s1,s2,s3,s5,s6,s7) :- R(x1,x2), R(x2,x3), R(x4,x3), R(x5,x4), R(x5,x6), "
       "R(x6,x7), R(x8,x7), R(x1,x8), P(x2), R(x1,s1), R(s2,x3), R(x8,s3), R(s5,x4), R(x5,s6), R(x5,s7)."},
      {"SPIKE_Q4",
       "Q(x1,x2,x3,x4,x5,x6,x7,x8,s1,s2,s3,s5,s6,s7) :- R(x1,x2), R(x2,x3), R(x4,x3), R(x5,x4), R(x5,x6), "
       "R(x6,x7), R(x8,x7), R(x1,x8), P(x2), R(x1,s1), R(s2,x3), R(x8,s3), R(x4,s5), R(x5,s6), R(x5,s7)."},
      {"TWENTY_CYCLE",
       "Q(a,b,c,d,e,f,g,h,i,j,k,l,m,n,o,p,q,r,s,t) :- R(a,b), R(b,c), R(d,c), R(e,d), R(e,f), R(g,f), R(g,h), "
       "R(h,i), R(j,i), R(j,k), R(l,k), R(m,l), R(m,n), R(o,n), R(o,p), R(p,q), R(r,q), R(r,s), R(t,s), R(a,t)."},
  };
  return list;
}

inline const Fixture& get(const std::string& name) {
  for (const auto& f : all())
    if (f.name == name) return f;
  throw SchemaError("unknown fixture " + name);
}

inline Query query(const std::string& name) { return get(name).query(); }

}  // namespace cqsj::fixtures
