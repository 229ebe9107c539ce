#include "oatb/traffic/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oatb::traffic {

namespace {

std::uint64_t truncated_lognormal_bytes(double mean, double sigma_log, std::uint64_t trunc,
                                        sim::RngStream& stream) {
  double draw = stream.lognormal_mean(mean, sigma_log);
  double clamped = std::min(draw, static_cast<double>(trunc));
  auto bytes = static_cast<std::uint64_t>(std::llround(clamped));
  return std::max<std::uint64_t>(1, bytes);
}

}  // namespace

void validate(const WebModel& m) {
  if (m.pages_per_session_mean < 1.0)
    throw std::invalid_argument("WebModel: pages per session mean must be >= 1");
  if (m.main_size_mean_bytes < 1.0 || m.embedded_size_mean_bytes < 1.0)
    throw std::invalid_argument("WebModel: object size means must be >= 1 byte");
  if (m.main_size_sigma_log < 0.0 || m.embedded_size_sigma_log < 0.0)
    throw std::invalid_argument("WebModel: sigma_log must be >= 0");
  if (m.embedded_count_mean < 0.0)
    throw std::invalid_argument("WebModel: embedded count mean must be >= 0");
  if (m.think_time_mean_s < 0.0)
    throw std::invalid_argument("WebModel: think time mean must be >= 0");
  if (m.truncation_bytes < 1)
    throw std::invalid_argument("WebModel: truncation must be >= 1 byte");
}

std::int64_t draw_session_pages(const WebModel& m, sim::RngStream& stream) {
  validate(m);
  return 1 + stream.geometric_count(m.pages_per_session_mean - 1.0);
}

PageSpec generate_page(const WebModel& m, sim::RngStream& stream) {
  validate(m);
  PageSpec page;
  page.main_bytes =
      truncated_lognormal_bytes(m.main_size_mean_bytes, m.main_size_sigma_log, m.truncation_bytes, stream);
  std::int64_t count = m.embedded_count_fixed >= 0 ? m.embedded_count_fixed
                                                   : stream.geometric_count(m.embedded_count_mean);
  page.embedded_bytes.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i)
    page.embedded_bytes.push_back(truncated_lognormal_bytes(m.embedded_size_mean_bytes,
                                                            m.embedded_size_sigma_log,
                                                            m.truncation_bytes, stream));
  page.think_time_s = m.think_time_mean_s > 0.0 ? stream.exponential(m.think_time_mean_s) : 0.0;
  return page;
}

void validate(const VideoModel& m) {
  if (m.fps <= 0.0) throw std::invalid_argument("VideoModel: fps must be > 0");
  if (m.gop.n < 1 || m.gop.m < 1) throw std::invalid_argument("VideoModel: GOP N and M must be >= 1");
  if (m.i_bytes < 1 || m.p_bytes < 1 || m.b_bytes < 1)
    throw std::invalid_argument("VideoModel: frame sizes must be >= 1 byte");
  if (m.duration_s < 0.0) throw std::invalid_argument("VideoModel: duration must be >= 0");
  if (m.playout_delay_s < 0.0) throw std::invalid_argument("VideoModel: playout delay must be >= 0");
}

std::vector<FrameEmission> generate_gop_schedule(const VideoModel& m) {
  validate(m);
  auto total = static_cast<std::int64_t>(std::floor(m.duration_s * m.fps));
  std::vector<FrameEmission> out;
  out.reserve(static_cast<std::size_t>(total));

  // Transmission order within one GOP: I, then each reference followed by
  // the B frames that precede it in display order, then the trailing Bs.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(m.gop.n));
  order.push_back(0);
  int last_ref = 0;
  for (int r = m.gop.m; r < m.gop.n; r += m.gop.m) {
    order.push_back(r);
    for (int b = r - m.gop.m + 1; b < r; ++b) order.push_back(b);
    last_ref = r;
  }
  for (int b = last_ref + 1; b < m.gop.n; ++b) order.push_back(b);

  std::int64_t slot = 0;
  std::int64_t gop_count = (total + m.gop.n - 1) / m.gop.n;
  for (std::int64_t g = 0; g < gop_count; ++g) {
    for (int pos : order) {
      std::int64_t display = g * m.gop.n + pos;
      if (display >= total) continue;  // truncated final GOP
      FrameEmission e;
      e.emit_s = static_cast<double>(slot) / m.fps;
      e.type = qoe::frame_type_at(m.gop, pos);
      e.display_index = display;
      e.gop_index = g;
      e.bytes = e.type == qoe::FrameType::I ? m.i_bytes
                : e.type == qoe::FrameType::P ? m.p_bytes
                                              : m.b_bytes;
      out.push_back(e);
      ++slot;
    }
  }
  return out;
}

std::vector<std::uint32_t> segment_object(std::uint64_t size_bytes, std::uint32_t mtu_payload) {
  if (size_bytes < 1) throw std::invalid_argument("segment_object: size must be >= 1");
  if (mtu_payload < 1) throw std::invalid_argument("segment_object: mtu payload must be >= 1");
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>((size_bytes + mtu_payload - 1) / mtu_payload));
  while (size_bytes > 0) {
    auto chunk = static_cast<std::uint32_t>(std::min<std::uint64_t>(size_bytes, mtu_payload));
    out.push_back(chunk);
    size_bytes -= chunk;
  }
  return out;
}

}  // namespace oatb::traffic
