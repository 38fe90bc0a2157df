#include "swipt/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "swipt/units.hpp"

namespace swipt {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) { return splitmix(splitmix(a) ^ (b + 0x632be59bd9b4e019ULL)); }

void ChannelConfig::validate() const {
  if (!(carrier_freq > 0.0)) throw std::invalid_argument("carrier_freq must be positive");
  if (!(ref_distance > 0.0)) throw std::invalid_argument("ref_distance must be positive");
  if (!(pathloss_exponent > 0.0)) throw std::invalid_argument("pathloss_exponent must be positive");
  if (!std::isfinite(rician_K) || !std::isfinite(antenna_gain)) throw std::invalid_argument("non-finite gain or K-factor");
  if (num_antennas < 1) throw std::invalid_argument("need at least one antenna");
  for (double d : distances) {
    if (!(d >= ref_distance)) throw std::invalid_argument("UE distance below the reference distance");
  }
}

double pathloss_db(const ChannelConfig& cfg, double d) {
  if (!(d >= cfg.ref_distance)) throw std::domain_error("distance below the reference distance");
  const double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * cfg.ref_distance * cfg.carrier_freq / kSpeedOfLight);
  return fspl - cfg.antenna_gain + 10.0 * cfg.pathloss_exponent * std::log10(d / cfg.ref_distance);
}

Eigen::VectorXcd ula_steering(int M, double theta) {
  Eigen::VectorXcd a(M);
  for (int m = 0; m < M; ++m) a[m] = std::polar(1.0, -std::numbers::pi * m * std::sin(theta));
  return a;
}

double ue_angle(const ChannelConfig& cfg, int ue) {
  std::mt19937_64 rng(mix_seed(mix_seed(cfg.seed, 0xa5a5a5a5ULL), static_cast<std::uint64_t>(ue)));
  return std::uniform_real_distribution<double>(-std::numbers::pi / 2, std::numbers::pi / 2)(rng);
}

ChannelRealization draw_channel(const ChannelConfig& cfg, std::uint64_t realization) {
  cfg.validate();
  const int M = cfg.num_antennas;
  const double K = db_to_linear(cfg.rician_K);
  const double los = std::sqrt(K / (K + 1.0));
  const double nlos = std::sqrt(1.0 / (K + 1.0));
  ChannelRealization out;
  for (std::size_t ue = 0; ue < cfg.distances.size(); ++ue) {
    const double gain = std::sqrt(db_to_linear(-pathloss_db(cfg, cfg.distances[ue])));
    std::mt19937_64 rng(mix_seed(mix_seed(cfg.seed, realization + 1), ue));
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    Eigen::VectorXcd h = los * ula_steering(M, ue_angle(cfg, static_cast<int>(ue)));
    for (int m = 0; m < M; ++m) {
      const double re = n(rng);
      const double im = n(rng);
      h[m] += nlos * std::complex<double>(re, im);
    }
    out.h.push_back(gain * h);
  }
  return out;
}

}  // namespace swipt
