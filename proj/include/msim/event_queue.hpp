#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "msim/time.hpp"

namespace msim {

/// Min-heap of timed callbacks, popped in (time, seq) order. seq is the
/// insertion counter, so events scheduled for the same instant run in the
/// order they were scheduled.
class EventQueue {
 public:
  using Action = std::function<void()>;

  void schedule(SimTime at, Action action) {
    heap_.push_back({at, seq_++, std::move(action)});
    std::push_heap(heap_.begin(), heap_.end(), Later{});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t pending() const { return heap_.size(); }
  SimTime now() const { return now_; }
  std::uint64_t executed() const { return executed_; }

  // Runs the earliest event. Returns false when the queue is empty.
  bool step() {
    if (heap_.empty()) return false;
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    now_ = e.time;
    ++executed_;
    e.action();
    return true;
  }

  void run() {
    while (step()) {
    }
  }

 private:
  struct Entry {
    SimTime time;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::vector<Entry> heap_;
  std::uint64_t seq_ = 0;
  std::uint64_t executed_ = 0;
  SimTime now_{0};
};

}  // namespace msim
