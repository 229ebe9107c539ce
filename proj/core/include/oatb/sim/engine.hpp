#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <string>
#include <unordered_set>
#include <vector>

#include "oatb/sim/rng.hpp"
#include "oatb/sim/time.hpp"

namespace oatb::sim {

using EventHandler = std::function<void()>;

/// Handle returned by Engine::schedule; permits cancellation.
struct EventHandle {
  std::uint64_t seq = 0;
};

struct RunSummary {
  std::uint64_t events_processed = 0;
  SimTime final_clock;
};

struct EngineCounters {
  std::uint64_t scheduled = 0;
  std::uint64_t processed = 0;
  std::uint64_t cancelled = 0;
  std::uint64_t remaining() const { return scheduled - processed - cancelled; }
};

/// Raised when an event handler throws; identifies the offending event.
class HandlerError : public std::runtime_error {
 public:
  HandlerError(std::string target, std::string kind, std::uint64_t seq, SimTime time, const std::string& what)
      : std::runtime_error("event handler failed at t=" + std::to_string(time.seconds()) + "s target=" + target +
                           " kind=" + kind + " seq=" + std::to_string(seq) + ": " + what),
        target_(std::move(target)),
        kind_(std::move(kind)),
        seq_(seq),
        time_(time) {}

  const std::string& target() const { return target_; }
  const std::string& kind() const { return kind_; }
  std::uint64_t seq() const { return seq_; }
  SimTime time() const { return time_; }

 private:
  std::string target_;
  std::string kind_;
  std::uint64_t seq_;
  SimTime time_;
};

/// Deterministic single-threaded discrete-event engine.
///
/// Events are processed in (time, insertion sequence) order; the sequence
/// tie-break makes traces reproducible without relying on heap internals.
/// One engine owns one run; independent engines may execute concurrently
/// in separate threads.
class Engine {
 public:
  explicit Engine(std::uint64_t root_seed = 0);

  SimTime now() const { return clock_; }
  std::uint64_t root_seed() const { return root_seed_; }

  /// Enqueue an event. Scheduling in the past is a contract violation.
  EventHandle schedule(SimTime when, std::string target, std::string kind, EventHandler fn);

  /// Returns false if the event already fired, was cancelled, or is unknown.
  bool cancel(EventHandle h);

  /// Process all events with time <= t_end; the clock ends at t_end.
  RunSummary run_until(SimTime t_end);

  /// Stream derived from this engine's root seed.
  RngStream stream(std::string_view path) const { return RngStream(root_seed_, path); }

  const EngineCounters& counters() const { return counters_; }

  /// Optional human-readable dump: one line per processed event,
  /// tab-separated "time_ps seq target kind".
  void set_trace_sink(std::ostream* sink) { trace_sink_ = sink; }

  /// FNV-1a hash over all processed events (time, seq, target, kind);
  /// equal across runs iff the processed event sequences are identical.
  std::uint64_t trace_hash() const { return trace_hash_; }

 private:
  struct Event {
    SimTime time;
    std::uint64_t seq;
    std::string target;
    std::string kind;
    EventHandler fn;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  void absorb_into_hash(const Event& ev);

  std::uint64_t root_seed_;
  SimTime clock_;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::unordered_set<std::uint64_t> cancelled_;
  EngineCounters counters_;
  std::ostream* trace_sink_ = nullptr;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace oatb::sim
