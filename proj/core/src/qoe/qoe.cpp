#include "oatb/qoe/qoe.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace oatb::qoe {

const char* to_string(FrameType t) {
  switch (t) {
    case FrameType::I: return "I";
    case FrameType::P: return "P";
    case FrameType::B: return "B";
  }
  return "?";
}

FrameType frame_type_at(const GopPattern& gop, int position) {
  if (gop.n < 1 || gop.m < 1) throw std::invalid_argument("gop: N and M must be >= 1");
  if (position < 0 || position >= gop.n) throw std::invalid_argument("gop: position out of range");
  if (position == 0) return FrameType::I;
  if (position % gop.m == 0) return FrameType::P;
  return FrameType::B;
}

InsufficientData::InsufficientData(std::size_t c, std::size_t w)
    : std::runtime_error("page_delay_stats: no eligible pages (censored=" + std::to_string(c) +
                         ", before_warmup=" + std::to_string(w) + ")"),
      censored(c),
      before_warmup(w) {}

PageDelayStats page_delay_stats(const std::vector<PageTrace>& traces, double warmup_s) {
  PageDelayStats out;
  double sum = 0.0;
  for (const auto& t : traces) {
    if (t.request_s < warmup_s) {
      ++out.before_warmup;
      continue;
    }
    if (!t.completion_s) {
      ++out.censored;
      continue;
    }
    if (*t.completion_s < t.request_s)
      throw std::invalid_argument("page_delay_stats: completion before request");
    sum += *t.completion_s - t.request_s;
    ++out.used;
  }
  if (out.used == 0) throw InsufficientData(out.censored, out.before_warmup);
  out.mean_s = sum / static_cast<double>(out.used);
  return out;
}

double decodable_frame_rate(const std::vector<FrameReceipt>& receipts, const GopPattern& gop) {
  if (gop.n < 1 || gop.m < 1) throw std::invalid_argument("gop: N and M must be >= 1");
  if (receipts.empty()) return 1.0;

  // Group received-in-time flags per GOP, keyed by position within the GOP.
  struct GopState {
    std::map<int, bool> received;  // position -> received_in_time
    int max_position = -1;
  };
  std::map<std::int64_t, GopState> gops;
  std::set<std::int64_t> seen;
  for (const auto& r : receipts) {
    if (!seen.insert(r.display_index).second)
      throw std::invalid_argument("decodable_frame_rate: duplicate frame index");
    std::int64_t expected_gop = r.display_index / gop.n;
    if (expected_gop != r.gop_index)
      throw std::invalid_argument("decodable_frame_rate: gop index inconsistent with pattern");
    int pos = static_cast<int>(r.display_index % gop.n);
    if (frame_type_at(gop, pos) != r.type)
      throw std::invalid_argument("decodable_frame_rate: frame type inconsistent with pattern");
    auto& g = gops[r.gop_index];
    g.received[pos] = r.received_in_time;
    g.max_position = std::max(g.max_position, pos);
  }

  std::size_t decodable = 0;
  std::size_t total = 0;
  for (auto& [gi, g] : gops) {
    // Decodability of the reference chain I, P, P, ... within this GOP.
    std::map<int, bool> ref_ok;
    for (int pos = 0; pos <= g.max_position; pos += gop.m) {
      auto it = g.received.find(pos);
      bool rec = it != g.received.end() && it->second;
      bool prev_ok = pos == 0 || ref_ok[pos - gop.m];
      ref_ok[pos] = rec && (pos == 0 || prev_ok);
    }
    for (const auto& [pos, rec] : g.received) {
      ++total;
      if (!rec) continue;
      if (pos % gop.m == 0) {
        if (ref_ok[pos]) ++decodable;
        continue;
      }
      int prev = pos - pos % gop.m;
      int next = prev + gop.m;
      bool prev_dec = ref_ok.count(prev) ? ref_ok[prev] : false;
      if (next <= g.max_position && g.received.count(next)) {
        bool next_dec = ref_ok.count(next) ? ref_ok[next] : false;
        if (prev_dec && next_dec) ++decodable;
      } else {
        // Trailing B: its following reference was never sent.
        if (prev_dec) ++decodable;
      }
    }
  }
  return static_cast<double>(decodable) / static_cast<double>(total);
}

void validate(const QoeSampleSet& s) {
  if (s.page_delay_s.size() != s.decodable_rate.size() ||
      s.page_delay_s.size() != s.replication_ids.size())
    throw std::invalid_argument("QoeSampleSet: replication counts differ between metrics");
  for (double d : s.page_delay_s)
    if (!(d > 0.0)) throw std::invalid_argument("QoeSampleSet: page delay must be > 0");
  for (double r : s.decodable_rate)
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("QoeSampleSet: DFR outside [0,1]");
}

}  // namespace oatb::qoe
