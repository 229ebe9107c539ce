#pragma once

#include <cstdint>
#include <vector>

#include "oatb/qoe/qoe.hpp"
#include "oatb/sim/rng.hpp"

namespace oatb::traffic {

// Web page model. Sizes are truncated lognormal (clamped to
// [1, truncation_bytes]); the embedded object count is geometric on
// {0,1,2,...} with the given mean, or a fixed constant.
struct WebModel {
  double pages_per_session_mean = 5.0;  // geometric on {1,2,...}
  double main_size_mean_bytes = 10240.0;
  double main_size_sigma_log = 1.0;
  double embedded_count_mean = 5.0;
  std::int64_t embedded_count_fixed = -1;  // >= 0 overrides the geometric draw
  double embedded_size_mean_bytes = 7680.0;
  double embedded_size_sigma_log = 1.0;
  double think_time_mean_s = 10.0;
  std::uint64_t truncation_bytes = 1048576;
};

struct PageSpec {
  std::uint64_t main_bytes = 0;
  std::vector<std::uint64_t> embedded_bytes;
  double think_time_s = 0.0;  // gap between this page's completion and the next request
};

void validate(const WebModel& m);

// Number of pages in one session: geometric on {1,2,...} with the model mean.
std::int64_t draw_session_pages(const WebModel& m, sim::RngStream& stream);

PageSpec generate_page(const WebModel& m, sim::RngStream& stream);

struct VideoModel {
  double fps = 25.0;
  qoe::GopPattern gop{12, 3};
  std::uint32_t i_bytes = 25000;
  std::uint32_t p_bytes = 10000;
  std::uint32_t b_bytes = 4000;
  double duration_s = 60.0;
  double playout_delay_s = 1.0;
};

void validate(const VideoModel& m);

// One frame emission slot. Frames leave the server at 1/fps spacing in
// transmission order (references ahead of the B frames that use them);
// display_index gives the frame's position in display order.
struct FrameEmission {
  double emit_s = 0.0;  // relative to stream start
  qoe::FrameType type = qoe::FrameType::I;
  std::int64_t display_index = 0;
  std::int64_t gop_index = 0;
  std::uint32_t bytes = 0;
};

std::vector<FrameEmission> generate_gop_schedule(const VideoModel& m);

// Splits an object into MTU-sized payloads; all full except possibly the last.
std::vector<std::uint32_t> segment_object(std::uint64_t size_bytes, std::uint32_t mtu_payload);

}  // namespace oatb::traffic
