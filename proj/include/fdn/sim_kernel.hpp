#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "fdn/time.hpp"

namespace fdn {

/// Identifies a scheduled event; used for cancellation.
struct EventHandle {
  std::uint64_t sequence = 0;
  bool valid() const { return sequence != 0; }
};

/// Deterministic discrete-event engine.
///
/// Events are dispatched in (fire time, insertion sequence) order. Fire times
/// are quantized to whole milliseconds at insertion, rounding half up.
class Simulator {
 public:
  using Action = std::function<void()>;

  Simulator() = default;
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Throws std::invalid_argument when fire_at_s lies before now().
  EventHandle schedule_at(double fire_at_s, std::string kind, Action action);
  EventHandle schedule_at_ms(SimTime fire_at, std::string kind, Action action);
  EventHandle schedule_in(double delay_s, std::string kind, Action action);

  /// Returns false when the event already fired or was cancelled.
  bool cancel(EventHandle handle);

  /// Dispatches every event with fire time <= t_end_s, then sets the clock to t_end_s.
  std::size_t run_until(double t_end_s);
  std::size_t run_until_ms(SimTime t_end);

  double now() const { return to_s(now_); }
  SimTime now_ms() const { return now_; }
  std::size_t pending() const { return queue_.size() - cancelled_.size(); }
  std::uint64_t dispatched() const { return dispatched_; }

  /// When set, each dispatch writes "time_ms\tsequence\tkind\n".
  void set_trace(std::ostream* out) { trace_ = out; }

 private:
  struct Event {
    SimTime fire_at;
    std::uint64_t sequence;
    std::string kind;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::unordered_set<std::uint64_t> live_;
  SimTime now_ = 0;
  std::uint64_t next_sequence_ = 1;
  std::uint64_t dispatched_ = 0;
  std::ostream* trace_ = nullptr;
};

/// Portable pseudo-random stream keyed by (seed, label).
///
/// The generator is SplitMix64: a 64-bit counter advanced by the golden-ratio
/// increment 0x9E3779B97F4A7C15 and passed through the SplitMix finalizer.
/// The initial counter is splitmix(seed) XOR FNV-1a-64(label), so streams with
/// different labels are decorrelated and every draw is bit-identical across
/// compilers and platforms.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();
  /// Uniform on [0,1) with 53 bits of precision.
  double uniform();
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

std::uint64_t fnv1a64(std::string_view text);
std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace fdn
