#include "stairlift/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "stairlift/random.hpp"

namespace stairlift {
namespace {

constexpr double kGravity = 9.80665;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 rotation(double yaw, double pitch, double roll) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  return {{{cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr},
           {sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr},
           {-sp, cp * sr, cp * cr}}};
}

enum class Motion { kStill, kWalk, kStairs, kLift };

struct Phase {
  ActivityLabel label = ActivityLabel::kNull;
  Motion motion = Motion::kStill;
  double duration_s = 0.0;
  int from_floor = 0;
  int to_floor = 0;
  double alt_start = 0.0;
  double alt_end = 0.0;
  // Gait
  double gait_hz = 0.0;
  double gait_amp = 0.0;
  double arm_swing = 0.0;
  double gait_origin_s = 0.0;  // shared by the flights and landings of one stairway
  std::array<double, 4> gait_phase{};
  // Lift
  double lift_speed = 0.0;
  double lift_ramp = 0.0;
  Mat3 orientation{};
};

// Per-participant traits; inter-subject variability lives here.
struct Traits {
  double walk_hz, stairs_up_hz, stairs_down_hz;
  double gait_amp, arm_swing;
  double lift_speed, stairs_pace, fidget;
  double yaw, pitch, roll;
};

double draw(Rng& rng, const Range& r) { return rng.uniform(r.lo, r.hi); }

Traits draw_traits(Rng& rng, const SynthConfig& c) {
  Traits t;
  t.walk_hz = draw(rng, c.walk_gait_hz);
  t.stairs_up_hz = draw(rng, c.stairs_up_gait_hz);
  t.stairs_down_hz = draw(rng, c.stairs_down_gait_hz);
  t.gait_amp = draw(rng, c.gait_amplitude_g);
  t.arm_swing = draw(rng, c.arm_swing_g);
  t.lift_speed = draw(rng, c.lift_speed_mps);
  t.stairs_pace = rng.uniform();
  t.fidget = rng.uniform(0.5, 1.5);
  t.yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
  t.pitch = rng.normal(0.0, 0.35);
  t.roll = rng.normal(0.0, 0.35);
  return t;
}

class SessionBuilder {
 public:
  SessionBuilder(const SynthConfig& c, Rng& rng, const Traits& traits)
      : c_(c), rng_(rng), traits_(traits) {}

  void still(double seconds) { add_simple(Motion::kStill, seconds); }
  void walk(double seconds) { add_simple(Motion::kWalk, seconds); }

  void null_dwell(Motion previous, Motion next) {
    const double total = draw(rng_, c_.null_dwell_s);
    double head = 0.0;
    if (previous == Motion::kLift) {
      head = rng_.uniform(2.0, 4.0);
      still(head);
    }
    double tail_walk = 0.0, tail_wait = 0.0;
    if (next == Motion::kLift) {
      tail_walk = rng_.uniform(4.0, 10.0);
      tail_wait = draw(rng_, c_.lift_wait_s);
    } else if (next == Motion::kStairs) {
      tail_walk = rng_.uniform(4.0, 10.0);
    }
    double middle = total - head - tail_walk - tail_wait;
    bool walking = true;
    while (middle > 0.5) {
      const double chunk = std::min(middle, rng_.uniform(5.0, 20.0));
      walking ? walk(chunk) : still(chunk);
      walking = !walking;
      middle -= chunk;
    }
    if (tail_walk > 0.0) walk(tail_walk);
    if (tail_wait > 0.0) still(tail_wait);
  }

  void stairs(int from, int to) {
    const bool up = to > from;
    const int floors = std::abs(to - from);
    const double pace = std::clamp(traits_.stairs_pace + rng_.normal(0.0, 0.1), 0.0, 1.0);
    double per_floor = c_.stairs_floor_s.lo + pace * (c_.stairs_floor_s.hi - c_.stairs_floor_s.lo);
    if (!up) per_floor *= 0.85;
    const int flights = floors * c_.flights_per_floor;
    std::vector<double> landings(static_cast<std::size_t>(flights - 1));
    double landing_total = 0.0;
    for (auto& l : landings) {
      l = draw(rng_, c_.landing_s);
      landing_total += l;
    }
    const double flight_s = std::max(1.0, (per_floor * floors - landing_total) / flights);
    const double rise = c_.floor_height_m / c_.flights_per_floor * (up ? 1.0 : -1.0);

    Phase p = base_phase(up ? ActivityLabel::kStairsUp : ActivityLabel::kStairsDown, Motion::kStairs);
    p.from_floor = from;
    p.to_floor = to;
    p.gait_hz = up ? traits_.stairs_up_hz : traits_.stairs_down_hz;
    p.gait_amp = traits_.gait_amp * (up ? 1.0 : c_.stairs_down_amplitude_factor) *
                 rng_.uniform(0.9, 1.1);
    p.arm_swing *= up ? 1.0 : 1.2;
    p.gait_origin_s = clock_s_;
    for (int f = 0; f < flights; ++f) {
      p.duration_s = flight_s;
      p.alt_start = altitude_;
      p.alt_end = altitude_ + rise;
      push(p);
      if (f + 1 < flights) {
        p.duration_s = landings[static_cast<std::size_t>(f)];
        p.alt_start = p.alt_end = altitude_;
        push(p);
      }
    }
  }

  void lift(int from, int to) {
    const bool up = to > from;
    const double distance = std::abs(to - from) * c_.floor_height_m;
    Phase p = base_phase(up ? ActivityLabel::kLiftUp : ActivityLabel::kLiftDown, Motion::kLift);
    p.from_floor = from;
    p.to_floor = to;
    p.lift_speed = traits_.lift_speed * rng_.uniform(0.95, 1.05);
    p.lift_ramp = c_.lift_ramp_s;
    p.duration_s = distance / p.lift_speed + p.lift_ramp;
    p.alt_start = altitude_;
    p.alt_end = altitude_ + (up ? distance : -distance);
    push(p);
  }

  double elapsed_s() const { return clock_s_; }
  std::vector<Phase> take() { return std::move(phases_); }

 private:
  Phase base_phase(ActivityLabel label, Motion motion) {
    Phase p;
    p.label = label;
    p.motion = motion;
    p.gait_hz = traits_.walk_hz * rng_.uniform(0.95, 1.05);
    p.gait_amp = traits_.gait_amp * rng_.uniform(0.85, 1.15);
    // Carrying a bag or holding a phone damps the arm swing.
    p.arm_swing = traits_.arm_swing * rng_.uniform(0.3, 1.0);
    for (auto& ph : p.gait_phase) ph = rng_.uniform(0.0, kTwoPi);
    p.orientation = rotation(traits_.yaw + rng_.normal(0.0, 0.2), traits_.pitch + rng_.normal(0.0, 0.25),
                             traits_.roll + rng_.normal(0.0, 0.25));
    p.gait_origin_s = clock_s_;
    return p;
  }

  void add_simple(Motion motion, double seconds) {
    Phase p = base_phase(ActivityLabel::kNull, motion);
    p.duration_s = seconds;
    p.alt_start = p.alt_end = altitude_;
    push(p);
  }

  void push(const Phase& p) {
    phases_.push_back(p);
    clock_s_ += p.duration_s;
    altitude_ = p.alt_end;
  }

  const SynthConfig& c_;
  Rng& rng_;
  const Traits& traits_;
  std::vector<Phase> phases_;
  double clock_s_ = 0.0;
  double altitude_ = 0.0;

 public:
  void set_altitude(double a) { altitude_ = a; }
};

// Altitude offset within a lift ride with a trapezoidal speed profile.
double lift_position(const Phase& p, double tau, double* accel) {
  const double total = std::fabs(p.alt_end - p.alt_start);
  const double sign = p.alt_end >= p.alt_start ? 1.0 : -1.0;
  const double ramp = std::min(p.lift_ramp, p.duration_s / 2.0);
  const double v = total / (p.duration_s - ramp);
  const double a = ramp > 0.0 ? v / ramp : 0.0;
  double pos = 0.0, acc = 0.0;
  if (tau < ramp) {
    pos = 0.5 * a * tau * tau;
    acc = a;
  } else if (tau < p.duration_s - ramp) {
    pos = 0.5 * a * ramp * ramp + v * (tau - ramp);
  } else {
    const double rem = std::max(0.0, p.duration_s - tau);
    pos = total - 0.5 * a * rem * rem;
    acc = -a;
  }
  if (accel) *accel = sign * acc;
  return sign * pos;
}

struct Spike {
  double t, amplitude;
};

}  // namespace

void SynthConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kInvalidConfig, what); };
  auto positive_range = [&](const Range& r, const char* name) {
    if (!(r.lo > 0.0) || !(r.hi >= r.lo)) fail(std::string(name) + " must be a positive range");
  };
  if (floor_min > floor_max || floor_min == floor_max) fail("floor range needs at least two floors");
  if (!(floor_height_m > 0.0)) fail("floor_height_m must be positive");
  if (!(pressure_gradient > 0.0)) fail("pressure_gradient must be positive");
  if (!(base_pressure > 0.0)) fail("base_pressure must be positive");
  if (!(rate_hz > 0.0) || rate_hz > 1000.0) fail("rate_hz must be in (0, 1000]");
  if (!(session_minutes > 0.0)) fail("session_minutes must be positive");
  if (flights_per_floor < 1) fail("flights_per_floor must be >= 1");
  if (!(lift_ramp_s >= 0.0)) fail("lift_ramp_s must be >= 0");
  positive_range(null_dwell_s, "null_dwell_s");
  positive_range(lift_wait_s, "lift_wait_s");
  positive_range(stairs_floor_s, "stairs_floor_s");
  positive_range(landing_s, "landing_s");
  positive_range(lift_speed_mps, "lift_speed_mps");
  positive_range(walk_gait_hz, "walk_gait_hz");
  positive_range(stairs_up_gait_hz, "stairs_up_gait_hz");
  positive_range(stairs_down_gait_hz, "stairs_down_gait_hz");
  positive_range(gait_amplitude_g, "gait_amplitude_g");
  if (!(arm_swing_g.lo >= 0.0) || !(arm_swing_g.hi >= arm_swing_g.lo)) fail("arm_swing_g range");
  if (!(stairs_down_amplitude_factor > 0.0)) fail("stairs_down_amplitude_factor must be positive");
  for (double v : {acc_noise_g, fidget_g, pressure_noise, pressure_drift, spike_rate_hz, spike_amplitude}) {
    if (!(v >= 0.0) || !std::isfinite(v)) fail("noise terms must be finite and >= 0");
  }
  if (!(pressure_drift_tau_s > 0.0)) fail("pressure_drift_tau_s must be positive");
}

SynthConfig SynthConfig::noiseless() const {
  SynthConfig c = *this;
  c.acc_noise_g = 0.0;
  c.fidget_g = 0.0;
  c.pressure_noise = 0.0;
  c.pressure_drift = 0.0;
  c.spike_rate_hz = 0.0;
  c.spike_amplitude = 0.0;
  return c;
}

std::string participant_name(int index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "P%02d", index + 1);
  return buf;
}

SynthSession generate_session(const std::string& participant_id, const SynthConfig& config) {
  config.validate();
  Rng rng(derive_seed(config.seed, 1));
  const Traits traits = draw_traits(rng, config);

  // Session plan.
  SessionBuilder builder(config, rng, traits);
  int floor = static_cast<int>(rng.uniform_int(config.floor_min, config.floor_max));
  builder.set_altitude((floor - config.floor_min) * config.floor_height_m);
  const double session_s = config.session_minutes * 60.0;
  Motion previous = Motion::kStill;
  while (true) {
    const bool done = builder.elapsed_s() >= session_s;
    if (done) {
      builder.null_dwell(previous, Motion::kStill);
      break;
    }
    int next = floor;
    while (next == floor) next = static_cast<int>(rng.uniform_int(config.floor_min, config.floor_max));
    const Motion mode = rng.coin() ? Motion::kStairs : Motion::kLift;
    builder.null_dwell(previous, mode);
    if (mode == Motion::kStairs) {
      builder.stairs(floor, next);
    } else {
      builder.lift(floor, next);
    }
    previous = mode;
    floor = next;
  }
  const std::vector<Phase> phases = builder.take();

  // Rendering.
  Rng noise(derive_seed(config.seed, 2));
  SynthSession session;
  Recording& rec = session.recording;
  rec.participant_id = participant_id;
  rec.nominal_rate_hz = config.rate_hz;
  const double period_ms = 1000.0 / config.rate_hz;
  const double dt = 1.0 / config.rate_hz;
  const double rho = std::exp(-dt / config.pressure_drift_tau_s);
  const double drift_step = config.pressure_drift * std::sqrt(1.0 - rho * rho);
  double drift = config.pressure_drift > 0.0 ? noise.normal(0.0, config.pressure_drift) : 0.0;
  const double fidget_amp = config.fidget_g * traits.fidget;
  const std::array<double, 3> fidget_hz = {0.31, 0.47, 0.23};
  std::array<double, 3> fidget_phase{};
  for (auto& ph : fidget_phase) ph = rng.uniform(0.0, kTwoPi);

  std::int64_t k = 0;
  double phase_start_s = 0.0;
  for (const Phase& p : phases) {
    const double phase_end_s = phase_start_s + p.duration_s;
    // Arm-swing pressure spikes while walking.
    std::vector<Spike> spikes;
    if (p.motion != Motion::kStill && p.motion != Motion::kLift && config.spike_rate_hz > 0.0) {
      double t = phase_start_s;
      while (true) {
        t += -std::log(1.0 - noise.uniform()) / config.spike_rate_hz;
        if (t >= phase_end_s) break;
        const double sign = noise.coin() ? 1.0 : -1.0;
        spikes.push_back({t, sign * config.spike_amplitude * noise.uniform(0.5, 1.0)});
      }
    }

    const std::int64_t first = k;
    while (true) {
      const double t = static_cast<double>(k) * dt;
      if (t >= phase_end_s - 1e-9) break;
      const double tau = t - phase_start_s;

      double vert = 0.0, fwd = 0.0, lat = 0.0;
      double altitude = p.alt_start;
      if (p.motion == Motion::kWalk || p.motion == Motion::kStairs) {
        const double g = t - p.gait_origin_s;
        const double w = kTwoPi * p.gait_hz * g;
        vert = p.gait_amp * (std::sin(w + p.gait_phase[0]) + 0.35 * std::sin(2.0 * w + p.gait_phase[1]));
        fwd = 0.5 * p.gait_amp * std::sin(w + p.gait_phase[2]);
        lat = p.arm_swing * std::sin(0.5 * w + p.gait_phase[3]);
        if (p.duration_s > 0.0) {
          altitude = p.alt_start + (p.alt_end - p.alt_start) * (tau / p.duration_s);
        }
      } else {
        fwd = fidget_amp * std::sin(kTwoPi * fidget_hz[0] * t + fidget_phase[0]);
        lat = fidget_amp * std::sin(kTwoPi * fidget_hz[1] * t + fidget_phase[1]);
        vert = 0.5 * fidget_amp * std::sin(kTwoPi * fidget_hz[2] * t + fidget_phase[2]);
        if (p.motion == Motion::kLift) {
          double a = 0.0;
          altitude = p.alt_start + lift_position(p, tau, &a);
          vert += a / kGravity;
        }
      }

      const std::array<double, 3> world = {fwd, lat, 1.0 + vert};
      std::array<double, 3> dev{};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) dev[i] += p.orientation[j][i] * world[j];
      }
      if (config.acc_noise_g > 0.0) {
        for (auto& v : dev) v += noise.normal(0.0, config.acc_noise_g);
      }

      double pressure = config.base_pressure - config.pressure_gradient * altitude;
      if (config.pressure_drift > 0.0) {
        drift = rho * drift + drift_step * noise.normal();
        pressure += drift;
      }
      if (config.pressure_noise > 0.0) pressure += noise.normal(0.0, config.pressure_noise);
      for (const auto& s : spikes) {
        const double u = (t - s.t) / 0.08;
        if (std::fabs(u) < 4.0) pressure += s.amplitude * std::exp(-u * u);
      }

      SensorSample sample;
      sample.timestamp_ms = config.start_epoch_ms + std::llround(static_cast<double>(k) * period_ms);
      sample.acc_x = dev[0];
      sample.acc_y = dev[1];
      sample.acc_z = dev[2];
      sample.magnitude = compute_magnitude(dev[0], dev[1], dev[2]);
      sample.pressure = pressure;
      sample.label = p.label;
      rec.samples.push_back(sample);
      ++k;
    }

    if (k > first) {
      const std::int64_t start_ms = rec.samples[static_cast<std::size_t>(first)].timestamp_ms;
      const std::int64_t end_ms = config.start_epoch_ms + std::llround(static_cast<double>(k) * period_ms);
      auto& segs = session.segments;
      if (!segs.empty() && segs.back().label == p.label && segs.back().end_ms == start_ms &&
          segs.back().from_floor == p.from_floor && segs.back().to_floor == p.to_floor) {
        segs.back().end_ms = end_ms;
      } else {
        segs.push_back({p.label, start_ms, end_ms, p.from_floor, p.to_floor});
      }
    }
    phase_start_s = phase_end_s;
  }
  return session;
}

std::vector<SynthSession> generate_cohort(int n_participants, const SynthConfig& config,
                                          std::uint64_t seed) {
  if (n_participants < 1) throw Error(ErrorCode::kInvalidConfig, "need at least one participant");
  config.validate();
  std::vector<SynthSession> cohort;
  cohort.reserve(static_cast<std::size_t>(n_participants));
  for (int i = 0; i < n_participants; ++i) {
    SynthConfig c = config;
    c.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    cohort.push_back(generate_session(participant_name(i), c));
  }
  return cohort;
}

}  // namespace stairlift
