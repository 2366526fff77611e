#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cqsj/engines/acyclic.hpp"
#include "cqsj/engines/cursor.hpp"
#include "cqsj/structure/images.hpp"

namespace cqsj::engines {

/// The database for an untangled query given one image answer: each R__S
/// relation keeps the R-facts agreeing with the image answer on S, with
/// those positions projected away.
inline Database restrict_for_untangled(const std::vector<structure::UntangledAtom>& provenance,
                                       const std::map<std::string, ValueId>& image_answer, const Database& db,
                                       TickCounter& ticks) {
  std::map<std::string, Relation> relations;
  for (const auto& u : provenance) {
    if (relations.count(u.atom.relation)) continue;
    const Relation* rel = db.find(u.source_relation);
    std::vector<ValueId> flat;
    bool any = false;
    std::vector<ValueId> wanted;
    for (const auto& v : u.shared) wanted.push_back(image_answer.at(v));
    if (rel) {
      for (std::size_t r = 0; r < rel->size(); ++r) {
        ticks.tick();
        auto row = rel->row(r);
        bool ok = true;
        for (std::size_t k = 0; k < u.dropped.size() && ok; ++k) ok = row[u.dropped[k]] == wanted[k];
        if (!ok) continue;
        any = true;
        std::size_t d = 0;
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (d < u.dropped.size() && u.dropped[d] == i) {
            ++d;
            continue;
          }
          flat.push_back(row[i]);
        }
      }
    }
    const std::size_t arity = u.atom.arity();
    relations.emplace(u.atom.relation, arity == 0 ? Relation::nullary(any) : Relation(arity, std::move(flat)));
  }
  return Database(db.dictionary(), std::move(relations));
}

class UntangleCursor;

/// Enumerates q along the remaining steps of an untangling sequence.
inline CursorPtr make_untangle_stage(const Query& q, std::vector<structure::UntanglingStep> steps,
                                     std::shared_ptr<const Database> db, Ticks ticks);

/// Linear-delay enumeration of an untangleable query: enumerate the image;
/// for each image answer build the restricted database and enumerate the
/// untangled query over it. Every image answer extends to at least one
/// answer of q, and distinct image answers give disjoint answer sets.
class UntangleCursor : public Cursor {
 public:
  UntangleCursor(const Query& q, const structure::UntanglingWitness& w, const Database& db, Ticks ticks)
      : UntangleCursor(q, (structure::validate_witness(q, w), w.steps), std::make_shared<Database>(db),
                       std::move(ticks)) {}

  UntangleCursor(const Query& q, std::vector<structure::UntanglingStep> steps, std::shared_ptr<const Database> db,
                 Ticks ticks)
      : Cursor(q.free_vars(), std::move(ticks)), db_(std::move(db)) {
    if (steps.empty()) throw InvalidWitness("untangling engine needs at least one step");
    step_ = steps.front();
    rest_.assign(steps.begin() + 1, steps.end());
    detail_ = structure::untangling_step_detailed(step_.query, step_.image);
    if (step_.kind == 'A')
      image_cursor_ = make_untangle_stage(step_.image, rest_, db_, counter());
    else
      image_cursor_ = std::make_unique<FullAcyclicCursor>(step_.image, *db_, counter());
    const auto& iv = step_.image.free_vars();
    const auto& rv = detail_.query.free_vars();
    for (const auto& v : q.free_vars()) {
      auto it = std::find(iv.begin(), iv.end(), v);
      if (it != iv.end()) {
        from_image_.push_back(true);
        slot_.push_back(static_cast<std::size_t>(it - iv.begin()));
      } else {
        from_image_.push_back(false);
        slot_.push_back(static_cast<std::size_t>(std::find(rv.begin(), rv.end(), v) - rv.begin()));
      }
    }
  }

 protected:
  Generator<Answer> run() override {
    const auto& iv = step_.image.free_vars();
    while (auto image_answer = image_cursor_->next()) {
      std::map<std::string, ValueId> by_var;
      for (std::size_t i = 0; i < iv.size(); ++i) by_var[iv[i]] = (*image_answer)[i];
      auto restricted = std::make_shared<Database>(restrict_for_untangled(detail_.provenance, by_var, *db_, *counter()));
      CursorPtr sub;
      if (step_.kind == 'A')
        sub = std::make_unique<FullAcyclicCursor>(detail_.query, *restricted, counter());
      else
        sub = make_untangle_stage(detail_.query, rest_, restricted, counter());
      while (auto rest_answer = sub->next()) {
        Answer out(from_image_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = from_image_[i] ? (*image_answer)[slot_[i]] : (*rest_answer)[slot_[i]];
        tick();
        co_yield out;
      }
    }
  }

 private:
  std::shared_ptr<const Database> db_;
  structure::UntanglingStep step_;
  std::vector<structure::UntanglingStep> rest_;
  structure::UntanglingResult detail_;
  CursorPtr image_cursor_;
  std::vector<bool> from_image_;
  std::vector<std::size_t> slot_;
};

inline CursorPtr make_untangle_stage(const Query& q, std::vector<structure::UntanglingStep> steps,
                                     std::shared_ptr<const Database> db, Ticks ticks) {
  if (steps.empty()) return std::make_unique<FullAcyclicCursor>(q, *db, std::move(ticks));
  return std::make_unique<UntangleCursor>(q, std::move(steps), std::move(db), std::move(ticks));
}

}  // namespace cqsj::engines
