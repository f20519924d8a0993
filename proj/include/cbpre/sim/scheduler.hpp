#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <queue>
#include <thread>
#include <vector>

namespace cbpre::sim {

/// Deterministic discrete-event loop. Events fire in (time, insertion) order.
class Scheduler {
 public:
  using Action = std::function<void()>;

  double now() const { return now_; }

  void at(double t, Action fn) {
    if (t < now_) t = now_;
    queue_.push(Entry{t, seq_++, std::move(fn)});
  }
  void after(double dt, Action fn) { at(now_ + dt, std::move(fn)); }

  /// With scale > 0, sleeps so that one simulated second takes 1/scale real seconds.
  void set_realtime(double scale) { realtime_ = scale; }

  bool empty() const { return queue_.empty(); }
  double next_time() const { return queue_.top().t; }

  /// Runs one event; false when the queue is empty.
  bool step() {
    if (queue_.empty()) return false;
    auto e = queue_.top();
    queue_.pop();
    if (realtime_ > 0 && e.t > now_) {
      std::this_thread::sleep_for(std::chrono::duration<double>((e.t - now_) / realtime_));
    }
    now_ = e.t;
    e.fn();
    return true;
  }

 private:
  struct Entry {
    double t;
    std::uint64_t seq;
    Action fn;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const { return a.t != b.t ? a.t > b.t : a.seq > b.seq; }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0;
  double realtime_ = 0;
};

}  // namespace cbpre::sim
