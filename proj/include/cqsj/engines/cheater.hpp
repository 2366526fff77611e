#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cqsj/engines/acyclic.hpp"
#include "cqsj/engines/cursor.hpp"
#include "cqsj/error.hpp"

namespace cqsj::engines {

/// Removes duplicates from a stream that repeats each answer at most `c`
/// times. Pulls `c` inner answers per emission; since at least one of any
/// `c` consecutive pulls past the emitted prefix is new, the queue of fresh
/// answers never runs dry before the inner stream ends.
class CheaterDedup : public Cursor {
 public:
  CheaterDedup(CursorPtr inner, std::size_t c)
      : Cursor(inner->free_vars(), inner->counter()), inner_(std::move(inner)), c_(c) {
    if (c_ == 0) throw std::invalid_argument("duplication bound must be positive");
  }

  std::size_t distinct_seen() const { return seen_.size(); }

 protected:
  Generator<Answer> run() override {
    std::deque<Answer> fresh;
    bool inner_done = false;
    while (true) {
      for (std::size_t i = 0; i < c_ && !inner_done; ++i) {
        auto a = inner_->next();
        tick();
        if (!a) {
          inner_done = true;
          break;
        }
        const std::size_t n = ++seen_[*a];
        if (n > c_)
          throw DuplicateBoundViolation("answer repeated " + std::to_string(n) + " times; bound is " +
                                        std::to_string(c_));
        if (n == 1) fresh.push_back(std::move(*a));
      }
      if (fresh.empty()) {
        if (inner_done) co_return;
        continue;
      }
      Answer out = std::move(fresh.front());
      fresh.pop_front();
      co_yield out;
    }
  }

 private:
  CursorPtr inner_;
  std::size_t c_;
  KeyMap<std::size_t> seen_;
};

/// Replays a fixed answer list; used to test wrappers on chosen streams.
/// `gap` ticks are spent before each answer.
class ListCursor : public Cursor {
 public:
  ListCursor(std::vector<std::string> free_vars, std::vector<Answer> answers, Ticks ticks, std::uint64_t gap = 1)
      : Cursor(std::move(free_vars), std::move(ticks)), answers_(std::move(answers)), gap_(gap) {}

 protected:
  Generator<Answer> run() override {
    for (const auto& a : answers_) {
      tick(gap_);
      co_yield a;
    }
  }

 private:
  std::vector<Answer> answers_;
  std::uint64_t gap_;
};

}  // namespace cqsj::engines
