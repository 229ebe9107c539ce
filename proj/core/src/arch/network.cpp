#include "oatb/arch/network.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace oatb::arch {

namespace {

constexpr const char* kTarget = "net";

}  // namespace

Network::Network(sim::Engine& engine, const ArchitectureConfig& config,
                 const NetworkOptions& options, energy::EnergyAccountant* accountant)
    : engine_(engine), config_(config), options_(options), accountant_(accountant) {
  validate(config_);
  if (options_.core_one_way_s < 0.0) throw std::invalid_argument("core latency must be >= 0");
  if (options_.dba_idle_poll_interval_s <= 0.0)
    throw std::invalid_argument("idle poll interval must be > 0");

  const energy::PowerProfile profile =
      accountant_ ? accountant_->profile() : energy::default_power_profile();
  const auto& onu_power = profile.at(energy::ComponentClass::onu);
  const auto& tx_power = profile.at(energy::ComponentClass::olt_transceiver);

  prop_ = sim::SimTime::from_seconds(propagation_delay_s(config_.feeder_length_km));
  core_ = sim::SimTime::from_seconds(options_.core_one_way_s);
  wake_ = sim::SimTime::from_seconds(onu_power.wake_s);
  doze_threshold_ = sim::SimTime::from_seconds(onu_power.sleep_threshold_s);
  sleep_enabled_ = options_.onu_sleep && onu_power.sleep_threshold_s > 0.0;

  const sim::SimTime t0 = engine_.now();
  if (accountant_) {
    accountant_->add_component("core", energy::ComponentClass::core, energy::PowerState::active,
                               t0);
    accountant_->add_component("l2", energy::ComponentClass::l2_switch,
                               energy::PowerState::active, t0);
  }

  const int n = config_.onu_count;
  onus_.resize(static_cast<std::size_t>(n));

  DbaParams dba;
  dba.feeder_rate_bps = config_.feeder_rate_bps;
  dba.max_grant_bytes = config_.max_grant_bytes;
  dba.guard_time_s = config_.guard_time_s;
  dba.idle_poll_interval_s = options_.dba_idle_poll_interval_s;
  const double rtt_s = 2.0 * prop_.seconds();

  switch (config_.kind) {
    case Kind::point_to_point: {
      for (int i = 0; i < n; ++i) {
        auto& p = onus_[static_cast<std::size_t>(i)];
        p.down_line = std::make_unique<ServiceQueue>(engine_, "down/" + std::to_string(i),
                                                     config_.line_rate_bps, config_.buffer_bytes);
        p.up_line = std::make_unique<ServiceQueue>(engine_, "up/" + std::to_string(i),
                                                   config_.line_rate_bps, config_.buffer_bytes);
        if (accountant_) {
          int id = accountant_->add_component("olt_tx/" + std::to_string(i),
                                              energy::ComponentClass::olt_transceiver,
                                              energy::PowerState::idle, t0);
          olt_tx_energy_.push_back(id);
          p.down_line->set_busy_hook([this, idx = olt_tx_energy_.size() - 1](sim::SimTime t,
                                                                             bool busy) {
            set_olt_tx_energy(idx, t, busy ? energy::PowerState::active : energy::PowerState::idle);
          });
        }
        p.up_line->set_busy_hook([this, i](sim::SimTime t, bool busy) {
          auto& q = path(i);
          q.tx_busy = busy;
          if (busy) {
            touch(i, t);
            set_onu_energy(i, t, energy::PowerState::active);
          } else {
            touch(i, t);
            if (q.doze == Doze::awake) set_onu_energy(i, t, energy::PowerState::idle);
          }
        });
      }
      break;
    }
    case Kind::tdm_pon: {
      feeder_ = std::make_unique<ServiceQueue>(engine_, "feeder", config_.feeder_rate_bps,
                                               config_.buffer_bytes);
      if (accountant_) {
        int id = accountant_->add_component("olt_tx/0", energy::ComponentClass::olt_transceiver,
                                            energy::PowerState::idle, t0);
        olt_tx_energy_.push_back(id);
        feeder_->set_busy_hook([this](sim::SimTime t, bool busy) {
          set_olt_tx_energy(0, t, busy ? energy::PowerState::active : energy::PowerState::idle);
        });
      }
      std::vector<int> ids(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = i;
      pollers_.push_back(std::make_unique<InterleavedPoller>(engine_, "dba", dba, rtt_s,
                                                             std::move(ids),
                                                             config_.buffer_bytes));
      break;
    }
    case Kind::hybrid_twdm_pon: {
      const double off_s = options_.pool_power_off ? tx_power.sleep_threshold_s : 0.0;
      pool_ = std::make_unique<PoolScheduler>(engine_, "pool", config_.wavelength_count,
                                              config_.transceiver_pool, config_.feeder_rate_bps,
                                              config_.tuning_time_s, config_.buffer_bytes, off_s);
      if (accountant_) {
        for (int k = 0; k < config_.transceiver_pool; ++k) {
          int id = accountant_->add_component("olt_tx/" + std::to_string(k),
                                              energy::ComponentClass::olt_transceiver,
                                              energy::PowerState::idle, t0);
          olt_tx_energy_.push_back(id);
        }
        pool_->set_power_hook([this](int tx, sim::SimTime t, bool busy, bool powered_on) {
          energy::PowerState s = !powered_on ? energy::PowerState::off
                                 : busy      ? energy::PowerState::active
                                             : energy::PowerState::idle;
          set_olt_tx_energy(static_cast<std::size_t>(tx), t, s);
        });
      }
      for (int w = 0; w < config_.wavelength_count; ++w) {
        std::vector<int> ids;
        for (int i = w; i < n; i += config_.wavelength_count) ids.push_back(i);
        pollers_.push_back(std::make_unique<InterleavedPoller>(
            engine_, "dba/" + std::to_string(w), dba, rtt_s, std::move(ids),
            config_.buffer_bytes, w));
      }
      break;
    }
  }

  if (config_.kind != Kind::point_to_point) {
    for (int i = 0; i < n; ++i) {
      auto& p = onus_[static_cast<std::size_t>(i)];
      p.distribution = std::make_unique<ServiceQueue>(engine_, "dist/" + std::to_string(i),
                                                      config_.distribution_rate_bps,
                                                      config_.buffer_bytes);
    }
    for (auto& poller : pollers_) {
      poller->set_delivered([this](int onu, std::uint32_t bytes, sim::SimTime enq,
                                   sim::SimTime arrival) {
        auto& q = path(onu).mac.up;
        q.done_packets += 1;
        q.done_bytes += bytes;
        q.sojourn_sum_s += (arrival - enq).seconds();
      });
      poller->set_tx_activity(
          [this](int onu, sim::SimTime start, sim::SimTime end) { on_burst(onu, start, end); });
      poller->start();
    }
  }

  if (accountant_) {
    for (int i = 0; i < n; ++i) {
      onus_[static_cast<std::size_t>(i)].energy_id = accountant_->add_component(
          "onu/" + std::to_string(i), energy::ComponentClass::onu, energy::PowerState::idle, t0);
    }
  }
  for (int i = 0; i < n; ++i) {
    onus_[static_cast<std::size_t>(i)].last_activity = t0;
    arm_doze(i);
  }
}

Network::OnuPath& Network::path(int onu) {
  if (onu < 0 || onu >= static_cast<int>(onus_.size()))
    throw std::out_of_range("onu index out of range");
  return onus_[static_cast<std::size_t>(onu)];
}

const Network::OnuPath& Network::path(int onu) const {
  if (onu < 0 || onu >= static_cast<int>(onus_.size()))
    throw std::out_of_range("onu index out of range");
  return onus_[static_cast<std::size_t>(onu)];
}

InterleavedPoller& Network::poller_for(int onu) {
  if (config_.kind == Kind::tdm_pon) return *pollers_.front();
  return *pollers_[static_cast<std::size_t>(onu % config_.wavelength_count)];
}

const OnuMacStats& Network::mac_stats(int onu) const { return path(onu).mac; }

std::uint64_t Network::upstream_backlog_bytes(int onu) const {
  const auto& p = path(onu);
  if (config_.kind == Kind::point_to_point) return p.up_line->backlog_bytes();
  return const_cast<Network*>(this)->poller_for(onu).backlog_bytes(onu);
}

void Network::set_grant_log(std::vector<Grant>* log) {
  for (auto& poller : pollers_) poller->set_grant_log(log);
}

void Network::send_downstream(int onu, std::uint32_t bytes, PacketDone done) {
  path(onu);
  down_totals_.injected_packets += 1;
  down_totals_.injected_bytes += bytes;
  engine_.schedule(engine_.now() + core_, kTarget, "core_down",
                   [this, onu, bytes, done = std::move(done)]() mutable {
                     enter_access_down(onu, bytes, std::move(done));
                   });
}

void Network::enter_access_down(int onu, std::uint32_t bytes, PacketDone done) {
  auto& p = path(onu);
  const sim::SimTime enq = engine_.now();
  p.mac.down.offered_packets += 1;
  p.mac.down.offered_bytes += bytes;
  auto after = [this, onu, bytes, enq, done = std::move(done)](sim::SimTime serialized) mutable {
    auto& q = path(onu).mac.down;
    q.done_packets += 1;
    q.done_bytes += bytes;
    q.sojourn_sum_s += (serialized - enq).seconds();
    engine_.schedule(serialized + prop_, kTarget, "prop_down",
                     [this, onu, bytes, done = std::move(done)]() mutable {
                       past_prop_down(onu, bytes, std::move(done));
                     });
  };
  bool ok = false;
  switch (config_.kind) {
    case Kind::point_to_point:
      ok = p.down_line->enqueue(bytes, std::move(after));
      break;
    case Kind::tdm_pon:
      ok = feeder_->enqueue(bytes, std::move(after));
      break;
    case Kind::hybrid_twdm_pon:
      ok = pool_->enqueue(onu % config_.wavelength_count, onu, bytes, std::move(after));
      break;
  }
  if (!ok) {
    p.mac.down.dropped_packets += 1;
    p.mac.down.dropped_bytes += bytes;
    down_totals_.dropped_packets += 1;
    down_totals_.dropped_bytes += bytes;
  }
}

void Network::past_prop_down(int onu, std::uint32_t bytes, PacketDone done) {
  auto& p = path(onu);
  if (config_.kind == Kind::point_to_point) {
    deliver_down(onu, bytes, std::move(done));
    return;
  }
  bool ok = p.distribution->enqueue(
      bytes, [this, onu, bytes, done = std::move(done)](sim::SimTime) mutable {
        deliver_down(onu, bytes, std::move(done));
      });
  if (!ok) {
    p.mac.dist_dropped_packets += 1;
    p.mac.dist_dropped_bytes += bytes;
    down_totals_.dropped_packets += 1;
    down_totals_.dropped_bytes += bytes;
  }
}

void Network::deliver_down(int onu, std::uint32_t bytes, PacketDone done) {
  auto& p = path(onu);
  const sim::SimTime now = engine_.now();
  if (!sleep_enabled_ || p.doze == Doze::awake) {
    complete_down(onu, bytes, std::move(done));
    return;
  }
  if (p.doze == Doze::asleep) {
    p.doze = Doze::waking;
    p.wake_end = now + wake_;
    const std::uint64_t epoch = ++p.wake_epoch;
    set_onu_energy(onu, now, energy::PowerState::waking);
    engine_.schedule(p.wake_end, kTarget, "wake", [this, onu, epoch]() {
      auto& q = path(onu);
      if (q.wake_epoch != epoch || q.doze != Doze::waking) return;
      q.doze = Doze::awake;
      set_onu_energy(onu, engine_.now(),
                     q.tx_busy ? energy::PowerState::active : energy::PowerState::idle);
      touch(onu, engine_.now());
    });
  }
  engine_.schedule(p.wake_end, kTarget, "deliver", [this, onu, bytes, done = std::move(done)]() mutable {
    complete_down(onu, bytes, std::move(done));
  });
}

void Network::complete_down(int onu, std::uint32_t bytes, PacketDone done) {
  const sim::SimTime now = engine_.now();
  down_totals_.delivered_packets += 1;
  down_totals_.delivered_bytes += bytes;
  if (accountant_) accountant_->add_delivered_bits(8ull * bytes);
  touch(onu, now);
  if (done) done(now);
}

void Network::send_upstream(int onu, std::uint32_t bytes, PacketDone done) {
  auto& p = path(onu);
  const sim::SimTime now = engine_.now();
  up_totals_.injected_packets += 1;
  up_totals_.injected_bytes += bytes;
  p.mac.up.offered_packets += 1;
  p.mac.up.offered_bytes += bytes;
  wake_for_upstream(onu, now);
  touch(onu, now);
  bool ok = false;
  if (config_.kind == Kind::point_to_point) {
    ok = p.up_line->enqueue(
        bytes, [this, onu, bytes, enq = now, done = std::move(done)](sim::SimTime serialized) mutable {
          engine_.schedule(serialized + prop_, kTarget, "prop_up",
                           [this, onu, bytes, enq, done = std::move(done)]() mutable {
                             auto& q = path(onu).mac.up;
                             q.done_packets += 1;
                             q.done_bytes += bytes;
                             q.sojourn_sum_s += (engine_.now() - enq).seconds();
                             olt_arrival_up(onu, bytes, std::move(done));
                           });
        });
  } else {
    ok = poller_for(onu).enqueue(
        onu, bytes, [this, onu, bytes, done = std::move(done)](sim::SimTime) mutable {
          olt_arrival_up(onu, bytes, std::move(done));
        });
  }
  if (!ok) {
    p.mac.up.dropped_packets += 1;
    p.mac.up.dropped_bytes += bytes;
    up_totals_.dropped_packets += 1;
    up_totals_.dropped_bytes += bytes;
  }
}

void Network::olt_arrival_up(int onu, std::uint32_t bytes, PacketDone done) {
  (void)onu;
  engine_.schedule(engine_.now() + core_, kTarget, "core_up",
                   [this, bytes, done = std::move(done)]() mutable {
                     up_totals_.delivered_packets += 1;
                     up_totals_.delivered_bytes += bytes;
                     if (accountant_) accountant_->add_delivered_bits(8ull * bytes);
                     if (done) done(engine_.now());
                   });
}

void Network::touch(int onu, sim::SimTime t) {
  auto& p = path(onu);
  if (t > p.last_activity) p.last_activity = t;
  arm_doze(onu);
}

void Network::arm_doze(int onu) {
  if (!sleep_enabled_) return;
  auto& p = path(onu);
  if (p.doze != Doze::awake || p.doze_check_pending) return;
  sim::SimTime due = p.last_activity + doze_threshold_;
  const sim::SimTime now = engine_.now();
  if (due < now) due = now + doze_threshold_;
  p.doze_check_pending = true;
  engine_.schedule(due, kTarget, "doze", [this, onu]() { doze_check(onu); });
}

void Network::doze_check(int onu) {
  auto& p = path(onu);
  p.doze_check_pending = false;
  if (p.doze != Doze::awake) return;
  const sim::SimTime now = engine_.now();
  const bool idle_long = now - p.last_activity >= doze_threshold_;
  if (idle_long && !p.tx_busy && upstream_backlog_bytes(onu) == 0) {
    p.doze = Doze::asleep;
    ++p.wake_epoch;
    set_onu_energy(onu, now, energy::PowerState::sleep);
    return;
  }
  sim::SimTime due = p.last_activity + doze_threshold_;
  if (due <= now) due = now + doze_threshold_;
  p.doze_check_pending = true;
  engine_.schedule(due, kTarget, "doze", [this, onu]() { doze_check(onu); });
}

void Network::wake_for_upstream(int onu, sim::SimTime now) {
  if (!sleep_enabled_) return;
  auto& p = path(onu);
  if (p.doze == Doze::awake) return;
  p.doze = Doze::awake;
  ++p.wake_epoch;
  set_onu_energy(onu, now, energy::PowerState::idle);
}

void Network::on_burst(int onu, sim::SimTime start, sim::SimTime end) {
  if (end == start) return;
  auto& p = path(onu);
  p.tx_busy = true;
  touch(onu, start);
  set_onu_energy(onu, start, energy::PowerState::active);
  engine_.schedule(end, kTarget, "burst_end", [this, onu]() {
    auto& q = path(onu);
    q.tx_busy = false;
    touch(onu, engine_.now());
    if (q.doze == Doze::awake) set_onu_energy(onu, engine_.now(), energy::PowerState::idle);
  });
}

void Network::set_onu_energy(int onu, sim::SimTime t, energy::PowerState s) {
  if (!accountant_) return;
  accountant_->set_state(path(onu).energy_id, t, s);
}

void Network::set_olt_tx_energy(std::size_t idx, sim::SimTime t, energy::PowerState s) {
  if (!accountant_) return;
  accountant_->set_state(olt_tx_energy_[idx], t, s);
}

}  // namespace oatb::arch
