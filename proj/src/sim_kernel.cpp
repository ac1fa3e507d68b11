#include "fdn/sim_kernel.hpp"

#include <stdexcept>

namespace fdn {

EventHandle Simulator::schedule_at(double fire_at_s, std::string kind, Action action) {
  return schedule_at_ms(to_ms(fire_at_s), std::move(kind), std::move(action));
}

EventHandle Simulator::schedule_at_ms(SimTime fire_at, std::string kind, Action action) {
  if (fire_at < now_) {
    throw std::invalid_argument("cannot schedule '" + kind + "' at " + std::to_string(fire_at) +
                                " ms, clock is at " + std::to_string(now_) + " ms");
  }
  const std::uint64_t seq = next_sequence_++;
  queue_.push(Event{fire_at, seq, std::move(kind), std::move(action)});
  live_.insert(seq);
  return EventHandle{seq};
}

EventHandle Simulator::schedule_in(double delay_s, std::string kind, Action action) {
  if (delay_s < 0.0) throw std::invalid_argument("negative delay for '" + kind + "'");
  return schedule_at_ms(now_ + to_ms(delay_s), std::move(kind), std::move(action));
}

bool Simulator::cancel(EventHandle handle) {
  if (!handle.valid() || live_.erase(handle.sequence) == 0) return false;
  cancelled_.insert(handle.sequence);
  return true;
}

std::size_t Simulator::run_until(double t_end_s) { return run_until_ms(to_ms(t_end_s)); }

std::size_t Simulator::run_until_ms(SimTime t_end) {
  if (t_end < now_) throw std::invalid_argument("run_until into the past");
  std::size_t count = 0;
  while (!queue_.empty() && queue_.top().fire_at <= t_end) {
    // priority_queue::top is const; the event is moved out before pop.
    Event ev = std::move(const_cast<Event&>(queue_.top()));
    queue_.pop();
    if (cancelled_.erase(ev.sequence) > 0) continue;
    live_.erase(ev.sequence);
    now_ = ev.fire_at;
    if (trace_ != nullptr) *trace_ << ev.fire_at << '\t' << ev.sequence << '\t' << ev.kind << '\n';
    ++count;
    ++dispatched_;
    ev.action();
  }
  now_ = t_end;
  return count;
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::string_view label)
    : state_(splitmix64_mix(seed + 0x9e3779b97f4a7c15ULL) ^ fnv1a64(label)) {}

std::uint64_t RngStream::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return splitmix64_mix(state_);
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

}  // namespace fdn
