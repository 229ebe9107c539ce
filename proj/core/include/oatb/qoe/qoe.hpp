#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oatb::qoe {

// One web page fetch. completion is absent when the run ended before the
// last object arrived (censored page).
struct PageTrace {
  double request_s = 0.0;
  std::optional<double> completion_s;
};

enum class FrameType { I, P, B };

const char* to_string(FrameType t);

// Receipt record for one sent video frame. display_index counts frames in
// display order across the whole stream; gop_index = display_index / gop N.
struct FrameReceipt {
  std::int64_t display_index = 0;
  FrameType type = FrameType::I;
  std::int64_t gop_index = 0;
  bool received_in_time = false;
};

// GOP pattern: N frames per GOP, reference spacing M (position j is I when
// j == 0, P when j % M == 0, B otherwise). Closed GOP: no references cross a
// GOP boundary; trailing B frames depend only on their preceding reference.
struct GopPattern {
  int n = 12;
  int m = 3;
};

FrameType frame_type_at(const GopPattern& gop, int position);

struct PageDelayStats {
  double mean_s = 0.0;
  std::size_t used = 0;
  std::size_t censored = 0;
  std::size_t before_warmup = 0;
};

class InsufficientData : public std::runtime_error {
 public:
  InsufficientData(std::size_t censored, std::size_t before_warmup);
  std::size_t censored = 0;
  std::size_t before_warmup = 0;
};

// Mean of (completion - request) over uncensored pages whose request time is
// >= warmup_s. Censored and warm-up pages are excluded but counted.
// Throws InsufficientData when no page qualifies.
PageDelayStats page_delay_stats(const std::vector<PageTrace>& traces, double warmup_s);

// Decodable frame rate over all sent frames. Decodability:
//   I: received in time;
//   P: received and its preceding reference decodable;
//   B: received and both surrounding references decodable; a B whose
//      following reference was never sent (trailing B, or truncated GOP)
//      needs only the preceding reference.
// Throws std::invalid_argument when a receipt's type or GOP index is
// inconsistent with the pattern, or indices repeat.
double decodable_frame_rate(const std::vector<FrameReceipt>& receipts, const GopPattern& gop);

// Per-replication scalar samples for the two QoE metrics.
struct QoeSampleSet {
  std::vector<int> replication_ids;
  std::vector<double> page_delay_s;   // smaller is better
  std::vector<double> decodable_rate; // larger is better, in [0,1]
  bool warmup_applied = false;
};

void validate(const QoeSampleSet& s);

}  // namespace oatb::qoe
