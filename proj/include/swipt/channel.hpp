#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace swipt {

// Large-scale geometry and fading statistics of the downlink.
struct ChannelConfig {
  double carrier_freq = 470e6;  // Hz
  double antenna_gain = 10.0;   // dBi, applied once
  double ref_distance = 2.0;    // m
  double pathloss_exponent = 2.6;
  double rician_K = 10.0;  // dB
  int num_antennas = 6;
  std::vector<double> distances;  // m, one per UE
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

struct ChannelRealization {
  std::vector<Eigen::VectorXcd> h;  // amplitude gains, one M-vector per UE
};

/// Log-distance loss in dB: free-space loss at d0 minus antenna gain, plus
/// 10 * exponent * log10(d / d0). Throws std::domain_error for d < d0.
double pathloss_db(const ChannelConfig& cfg, double d);

/// Half-wavelength uniform linear array response at angle theta (rad).
Eigen::VectorXcd ula_steering(int M, double theta);

/// Angle of UE `ue`, a function of the seed only (fixed across realizations).
double ue_angle(const ChannelConfig& cfg, int ue);

/// Rician draw; a pure function of (cfg, realization).
ChannelRealization draw_channel(const ChannelConfig& cfg, std::uint64_t realization);

/// 64-bit mixing used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace swipt
