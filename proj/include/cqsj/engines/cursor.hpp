#pragma once

#include <chrono>
#include <coroutine>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cqsj/database.hpp"

namespace cqsj::engines {

/// Answer as value ids of the source database, aligned with free variables.
using Answer = std::vector<ValueId>;

/// Elementary-step counter shared by a cursor and everything it drives.
struct TickCounter {
  std::uint64_t count = 0;
  void tick(std::uint64_t n = 1) { count += n; }
};

using Ticks = std::shared_ptr<TickCounter>;

inline Ticks make_ticks() { return std::make_shared<TickCounter>(); }

/// Minimal pull-based coroutine generator.
template <class T>
class Generator {
 public:
  struct promise_type {
    std::optional<T> value;
    std::exception_ptr error;

    Generator get_return_object() { return Generator(std::coroutine_handle<promise_type>::from_promise(*this)); }
    std::suspend_always initial_suspend() noexcept { return {}; }
    std::suspend_always final_suspend() noexcept { return {}; }
    std::suspend_always yield_value(T v) {
      value = std::move(v);
      return {};
    }
    void return_void() {}
    void unhandled_exception() { error = std::current_exception(); }
  };

  Generator() = default;
  explicit Generator(std::coroutine_handle<promise_type> h) : handle_(h) {}
  Generator(Generator&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  Generator& operator=(Generator&& other) noexcept {
    if (this != &other) {
      reset();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  Generator(const Generator&) = delete;
  Generator& operator=(const Generator&) = delete;
  ~Generator() { reset(); }

  std::optional<T> next() {
    if (!handle_ || handle_.done()) return std::nullopt;
    handle_.promise().value.reset();
    handle_.resume();
    if (auto e = handle_.promise().error) {
      handle_.promise().error = nullptr;
      std::rethrow_exception(e);
    }
    if (handle_.done()) return std::nullopt;
    return std::move(handle_.promise().value);
  }

 private:
  void reset() {
    if (handle_) handle_.destroy();
    handle_ = {};
  }

  std::coroutine_handle<promise_type> handle_;
};

/// Preprocess-then-next answer stream. Subclasses preprocess in their
/// constructor and produce answers from `run()`.
class Cursor {
 public:
  enum class Phase { preprocessing, enumerating, done };

  Cursor(std::vector<std::string> free_vars, Ticks ticks) : free_(std::move(free_vars)), ticks_(std::move(ticks)) {}
  virtual ~Cursor() = default;
  Cursor(const Cursor&) = delete;
  Cursor& operator=(const Cursor&) = delete;

  std::optional<Answer> next() {
    if (phase_ == Phase::done) return std::nullopt;
    if (phase_ == Phase::preprocessing) {
      gen_ = run();
      phase_ = Phase::enumerating;
    }
    auto out = gen_.next();
    if (!out) phase_ = Phase::done;
    return out;
  }

  Phase phase() const { return phase_; }
  const std::vector<std::string>& free_vars() const { return free_; }
  std::uint64_t ticks() const { return ticks_->count; }
  const Ticks& counter() const { return ticks_; }

 protected:
  virtual Generator<Answer> run() = 0;
  void tick(std::uint64_t n = 1) { ticks_->tick(n); }

 private:
  std::vector<std::string> free_;
  Ticks ticks_;
  Phase phase_ = Phase::preprocessing;
  Generator<Answer> gen_;
};

using CursorPtr = std::unique_ptr<Cursor>;

/// Drains a cursor into a vector (stream order).
inline std::vector<Answer> drain(Cursor& c, std::optional<std::size_t> limit = std::nullopt) {
  std::vector<Answer> out;
  while (!limit || out.size() < *limit) {
    auto a = c.next();
    if (!a) break;
    out.push_back(std::move(*a));
  }
  return out;
}

inline std::set<AnswerTuple> answer_set(const Database& db, const std::vector<Answer>& answers) {
  std::set<AnswerTuple> out;
  for (const auto& a : answers) out.insert(to_values(db, a));
  return out;
}

struct DelayStats {
  std::uint64_t preprocessing_ticks = 0;
  std::uint64_t max_gap = 0;
  std::uint64_t answers = 0;
  double wall_ms = 0;

  nlohmann::json to_json() const {
    return {{"preprocessing_ticks", preprocessing_ticks}, {"max_gap", max_gap}, {"answers", answers}, {"wall_ms", wall_ms}};
  }
};

/// Builds a cursor with a fresh counter, runs it to completion and records
/// preprocessing ticks and the largest tick gap around every emission.
inline DelayStats measure_delay(const std::function<CursorPtr(Ticks)>& make_cursor) {
  const auto start = std::chrono::steady_clock::now();
  Ticks ticks = make_ticks();
  CursorPtr cursor = make_cursor(ticks);
  DelayStats stats;
  stats.preprocessing_ticks = ticks->count;
  std::uint64_t last = ticks->count;
  while (true) {
    auto a = cursor->next();
    if (a) ticks->tick();  // the emission itself
    const std::uint64_t now = ticks->count;
    stats.max_gap = std::max(stats.max_gap, now - last);
    last = now;
    if (!a) break;
    ++stats.answers;
  }
  stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

}  // namespace cqsj::engines
