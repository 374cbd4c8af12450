#pragma once

#include <algorithm>
#include <vector>

#include "hallnet/random.hpp"
#include "hallnet/simulator.hpp"

namespace testing_support {

/// Random hall parameters that satisfy the explicit-Euler stability bound.
inline hallnet::sim::HallParams random_params(hallnet::Rng& rng) {
  hallnet::sim::HallParams p;
  p.thermal_capacity = rng.uniform(100.0, 20000.0);
  p.k_water = rng.uniform(0.0, 5.0);
  p.k_fresh = rng.uniform(0.0, 5.0);
  p.compost_heat = rng.uniform(0.0, 10.0);
  p.noise_std = 0.0;
  // dt * (k_water + k_fresh) / C drawn in (0, 0.95)
  const double ratio = rng.uniform(0.01, 0.95);
  p.dt = ratio * p.thermal_capacity / std::max(p.k_water + p.k_fresh, 1e-6);
  p.initial_temp = rng.uniform(-5.0, 35.0);
  return p;
}

inline hallnet::sim::Controls random_controls(hallnet::Rng& rng) {
  return {rng.uniform(-15.0, 15.0), rng.uniform(25.0, 60.0), rng.uniform(), rng.uniform(),
          rng.uniform()};
}

/// Steady state of the noiseless update. The Euler iteration is a contraction
/// towards it, so trajectories stay between the start and this value.
inline double equilibrium(const hallnet::sim::Controls& c, const hallnet::sim::HallParams& p) {
  const double a = p.k_water * c.water_tap;
  const double b = p.k_fresh * c.fresh_damper;
  return (a * c.water_temp + b * c.ambient_temp + p.compost_heat) / (a + b);
}

inline const double kTapLevels[] = {1.0 / 3.0, 2.0 / 3.0, 1.0};

/// Settled temperature after `steps` for each design opening level of the
/// chosen actuator (tap when `vary_tap`, otherwise fresh damper).
inline std::vector<double> settled_over_levels(hallnet::sim::Controls c,
                                               const hallnet::sim::HallParams& p, bool vary_tap,
                                               int steps) {
  std::vector<double> out;
  for (double level : kTapLevels) {
    (vary_tap ? c.water_tap : c.fresh_damper) = level;
    out.push_back(hallnet::sim::settle(p.initial_temp, c, p, steps));
  }
  return out;
}

/// True when water is hotter than every state the trajectories can visit for
/// all three tap levels.
inline bool water_above_trajectories(hallnet::sim::Controls c, const hallnet::sim::HallParams& p) {
  for (double level : kTapLevels) {
    c.water_tap = level;
    if (!(c.water_temp > p.initial_temp && c.water_temp > equilibrium(c, p))) return false;
  }
  return true;
}

/// True when ambient air is colder than every state the trajectories can
/// visit for all three fresh-damper levels.
inline bool ambient_below_trajectories(hallnet::sim::Controls c, const hallnet::sim::HallParams& p) {
  for (double level : kTapLevels) {
    c.fresh_damper = level;
    if (!(c.ambient_temp < p.initial_temp && c.ambient_temp < equilibrium(c, p))) return false;
  }
  return true;
}

}  // namespace testing_support
