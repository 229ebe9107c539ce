#include "oatb/sim/engine.hpp"

#include <stdexcept>

namespace oatb::sim {

Engine::Engine(std::uint64_t root_seed) : root_seed_(root_seed) {}

EventHandle Engine::schedule(SimTime when, std::string target, std::string kind, EventHandler fn) {
  if (when < clock_)
    throw std::invalid_argument("schedule: past event (t=" + std::to_string(when.seconds()) +
                                "s, clock=" + std::to_string(clock_.seconds()) + "s, target=" + target +
                                ", kind=" + kind + ")");
  const std::uint64_t seq = next_seq_++;
  queue_.push(Event{when, seq, std::move(target), std::move(kind), std::move(fn)});
  ++counters_.scheduled;
  return EventHandle{seq};
}

bool Engine::cancel(EventHandle h) {
  if (h.seq >= next_seq_) return false;
  // Lazy tombstone; the heap entry is skipped at dequeue time.
  if (cancelled_.contains(h.seq)) return false;
  cancelled_.insert(h.seq);
  ++counters_.cancelled;
  return true;
}

void Engine::absorb_into_hash(const Event& ev) {
  constexpr std::uint64_t prime = 0x100000001b3ULL;
  auto absorb = [&](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      trace_hash_ ^= p[i];
      trace_hash_ *= prime;
    }
  };
  const std::int64_t t = ev.time.picos();
  absorb(&t, sizeof t);
  absorb(&ev.seq, sizeof ev.seq);
  absorb(ev.target.data(), ev.target.size());
  absorb(ev.kind.data(), ev.kind.size());
}

RunSummary Engine::run_until(SimTime t_end) {
  RunSummary summary;
  while (!queue_.empty() && queue_.top().time <= t_end) {
    Event ev = queue_.top();
    queue_.pop();
    if (cancelled_.contains(ev.seq)) {
      cancelled_.erase(ev.seq);
      continue;
    }
    if (ev.time < clock_) throw std::logic_error("engine: event queue produced a time in the past");
    clock_ = ev.time;
    ++counters_.processed;
    ++summary.events_processed;
    absorb_into_hash(ev);
    if (trace_sink_)
      (*trace_sink_) << ev.time.picos() << '\t' << ev.seq << '\t' << ev.target << '\t' << ev.kind << '\n';
    try {
      ev.fn();
    } catch (const HandlerError&) {
      throw;
    } catch (const std::exception& e) {
      throw HandlerError(ev.target, ev.kind, ev.seq, ev.time, e.what());
    }
  }
  if (t_end > clock_) clock_ = t_end;
  summary.final_clock = clock_;
  return summary;
}

}  // namespace oatb::sim
