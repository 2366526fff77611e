#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cqsj/engines/acyclic.hpp"
#include "cqsj/engines/cursor.hpp"
#include "cqsj/structure/images.hpp"

namespace cqsj::engines {

/// Constant-delay enumeration of a mirror query. For each image answer
/// (a, b): emit (a, b, b), then (a, b, b') and (a, b', b) for every b'
/// stored under a, then store b under a. The table grows with the output.
class MirrorCursor : public Cursor {
 public:
  MirrorCursor(const Query& q, const structure::MirrorWitness& w, const Database& db, Ticks ticks)
      : Cursor(q.free_vars(), std::move(ticks)) {
    structure::validate_mirror(q, w);
    image_ = std::make_unique<FullAcyclicCursor>(w.image, db, counter());
    const auto& iv = w.image.free_vars();
    const auto rest = structure::atoms_outside(q, w.image);
    std::set<std::string> rest_vars;
    for (const auto& a : rest) rest_vars.insert(a.args.begin(), a.args.end());
    auto image_pos = [&](const std::string& v) {
      return static_cast<std::size_t>(std::find(iv.begin(), iv.end(), v) - iv.begin());
    };
    std::vector<std::size_t> shared_pos, own_pos;
    for (std::size_t i = 0; i < iv.size(); ++i) (rest_vars.count(iv[i]) ? shared_pos : own_pos).push_back(i);
    shared_ = shared_pos;
    own_ = own_pos;
    // Each output variable reads either the image answer (slot in image
    // order) or the mirrored completion (index into own_).
    for (const auto& v : q.free_vars()) {
      const std::size_t p = image_pos(v);
      if (p < iv.size()) {
        source_.push_back({false, p});
      } else {
        const std::size_t target = image_pos(w.iso.at(v));
        source_.push_back({true, static_cast<std::size_t>(std::find(own_.begin(), own_.end(), target) - own_.begin())});
      }
    }
  }

 protected:
  Generator<Answer> run() override {
    KeyMap<std::vector<std::vector<ValueId>>> table;
    while (auto ans = image_->next()) {
      std::vector<ValueId> key, mine;
      for (std::size_t p : shared_) key.push_back((*ans)[p]);
      for (std::size_t p : own_) mine.push_back((*ans)[p]);
      tick();
      auto& seen = table[key];
      co_yield compose(*ans, mine);
      for (std::size_t i = 0; i < seen.size(); ++i) {
        co_yield compose(*ans, seen[i]);
        co_yield compose(with_own(*ans, seen[i]), mine);
      }
      seen.push_back(std::move(mine));
    }
  }

 private:
  struct Source {
    bool mirrored;
    std::size_t index;
  };

  Answer with_own(Answer image_answer, const std::vector<ValueId>& own) const {
    for (std::size_t k = 0; k < own_.size(); ++k) image_answer[own_[k]] = own[k];
    return image_answer;
  }

  Answer compose(const Answer& image_answer, const std::vector<ValueId>& mirrored) {
    tick();
    Answer out;
    out.reserve(source_.size());
    for (const auto& s : source_) out.push_back(s.mirrored ? mirrored[s.index] : image_answer[s.index]);
    return out;
  }

  CursorPtr image_;
  std::vector<std::size_t> shared_, own_;
  std::vector<Source> source_;
};

}  // namespace cqsj::engines
