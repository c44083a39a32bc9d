#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stairlift/domain.hpp"

namespace stairlift {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Synthetic building walk: random floor sequence, coin-toss stairs/lift,
// Null dwell in between. Acceleration in g, pressure in hPa-like units.
struct SynthConfig {
  int floor_min = 2;
  int floor_max = 8;
  double floor_height_m = 3.5;
  double pressure_gradient = 0.12;  // pressure units per metre of altitude
  double base_pressure = 1000.0;
  double rate_hz = 50.0;
  double session_minutes = 30.0;
  std::int64_t start_epoch_ms = 1'700'000'000'000;

  Range null_dwell_s{25.0, 65.0};
  Range lift_wait_s{4.0, 15.0};
  Range stairs_floor_s{15.0, 35.0};  // per floor, landings included
  int flights_per_floor = 2;
  Range landing_s{1.5, 3.0};
  Range lift_speed_mps{0.45, 0.85};
  double lift_ramp_s = 1.0;

  Range walk_gait_hz{1.6, 2.0};
  Range stairs_up_gait_hz{1.4, 1.8};
  Range stairs_down_gait_hz{1.7, 2.2};
  Range gait_amplitude_g{0.15, 0.35};
  double stairs_down_amplitude_factor = 1.35;
  Range arm_swing_g{0.05, 0.35};

  // Noise terms; all may be zero for noiseless synthesis.
  double acc_noise_g = 0.015;
  double fidget_g = 0.02;
  double pressure_noise = 0.02;
  double pressure_drift = 0.03;
  double pressure_drift_tau_s = 6.0;
  double spike_rate_hz = 0.25;
  double spike_amplitude = 0.12;

  std::uint64_t seed = 42;

  // Throws InvalidConfig.
  void validate() const;

  // Copy with every noise term set to zero.
  SynthConfig noiseless() const;
};

struct GroundTruthSegment {
  ActivityLabel label = ActivityLabel::kNull;
  std::int64_t start_ms = 0;  // inclusive
  std::int64_t end_ms = 0;    // exclusive
  int from_floor = 0;
  int to_floor = 0;
};

struct SynthSession {
  Recording recording;
  std::vector<GroundTruthSegment> segments;
};

SynthSession generate_session(const std::string& participant_id, const SynthConfig& config);

// Participant i (0-based) is "P01", "P02", ... and is generated by
// generate_session with seed derive_seed(seed, i).
std::vector<SynthSession> generate_cohort(int n_participants, const SynthConfig& config,
                                          std::uint64_t seed);

std::string participant_name(int index);

}  // namespace stairlift
