#pragma once

#include <cstdint>
#include <vector>

#include "hallnet/domain.hpp"
#include "hallnet/random.hpp"

namespace hallnet::sim {

/// Lumped single-zone parameters. Units: kJ/°C for capacity, kW/°C for the
/// conductances, kW for the compost source, seconds for the step.
struct HallParams {
  double thermal_capacity = 5000.0;
  double k_water = 2.0;
  double k_fresh = 1.0;
  double compost_heat = 3.0;
  double noise_std = 0.2;
  double dt = 60.0;
  double initial_temp = 18.0;
};

/// Throws ValidationError on sign violations or when explicit Euler would be
/// unstable: dt * (k_water + k_fresh) / thermal_capacity must stay below 1.
void validate(const HallParams& params);

struct Controls {
  double ambient_temp = 0.0;
  double water_temp = 0.0;
  double fresh_damper = 0.0;
  double circ_damper = 0.0;
  double water_tap = 0.0;
};

void validate(const Controls& controls);

/// Factorial treatment design. Defaults are the field-study levels: ambient
/// -10/0/+10 °C, water 30/40/50 °C and actuator openings of 1/3, 2/3, 3/3.
struct TreatmentDesign {
  std::vector<double> ambient_levels{-10.0, 0.0, 10.0};
  std::vector<double> water_levels{30.0, 40.0, 50.0};
  std::vector<double> fresh_levels{1.0 / 3.0, 2.0 / 3.0, 1.0};
  std::vector<double> circ_levels{1.0 / 3.0, 2.0 / 3.0, 1.0};
  std::vector<double> tap_levels{1.0 / 3.0, 2.0 / 3.0, 1.0};
  int repetitions = 1;
  int settle_steps = 240;

  std::size_t cell_count() const;
};

void validate(const TreatmentDesign& design);

/// One explicit-Euler step of
///   C dT/dt = k_water*tap*(T_water - T) + k_fresh*fresh*(T_ambient - T) + Q_compost.
/// The circulation damper only mixes indoor air and carries no net heat.
/// When `noise` is given and noise_std > 0, Gaussian noise is added.
double step(double current_temp, const Controls& controls, const HallParams& params,
            Rng* noise = nullptr);

/// Runs `steps` noiseless steps from `start_temp`.
double settle(double start_temp, const Controls& controls, const HallParams& params, int steps);

/// Simulates every (level combination, repetition) cell for settle_steps from
/// initial_temp and records one sample per cell with measurement noise drawn
/// from a stream derived from (seed, cell index). Cells are ordered ambient,
/// water, fresh, circ, tap, repetition with the last varying fastest.
Dataset generate(const TreatmentDesign& design, const HallParams& params, std::uint64_t seed,
                 bool parallel = false);

}  // namespace hallnet::sim
