#include "hallnet/simulator.hpp"

#include <cmath>
#include <string>

#include "hallnet/error.hpp"
#include "hallnet/parallel.hpp"

namespace hallnet::sim {

void validate(const HallParams& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.thermal_capacity) || p.thermal_capacity <= 0.0)
    throw ValidationError("thermal_capacity must be positive");
  if (!finite(p.k_water) || p.k_water < 0.0) throw ValidationError("k_water must be >= 0");
  if (!finite(p.k_fresh) || p.k_fresh < 0.0) throw ValidationError("k_fresh must be >= 0");
  if (!finite(p.compost_heat)) throw ValidationError("compost_heat must be finite");
  if (!finite(p.noise_std) || p.noise_std < 0.0) throw ValidationError("noise_std must be >= 0");
  if (!finite(p.dt) || p.dt <= 0.0) throw ValidationError("dt must be positive");
  if (!finite(p.initial_temp)) throw ValidationError("initial_temp must be finite");
  if (p.dt * (p.k_water + p.k_fresh) / p.thermal_capacity >= 1.0)
    throw ValidationError("unstable step: dt*(k_water+k_fresh)/thermal_capacity must be < 1");
}

void validate(const Controls& c) {
  validate(Sample{c.ambient_temp, c.water_temp, c.fresh_damper, c.circ_damper, c.water_tap, 0.0});
}

std::size_t TreatmentDesign::cell_count() const {
  return ambient_levels.size() * water_levels.size() * fresh_levels.size() * circ_levels.size() *
         tap_levels.size() * static_cast<std::size_t>(repetitions > 0 ? repetitions : 0);
}

void validate(const TreatmentDesign& d) {
  const std::pair<const char*, const std::vector<double>*> sets[] = {
      {"ambient_levels", &d.ambient_levels}, {"water_levels", &d.water_levels},
      {"fresh_levels", &d.fresh_levels},     {"circ_levels", &d.circ_levels},
      {"tap_levels", &d.tap_levels}};
  for (const auto& [name, levels] : sets) {
    if (levels->empty())
      throw ValidationError(std::string("design produces 0 cells: ") + name + " is empty");
    for (double x : *levels)
      if (!std::isfinite(x)) throw ValidationError(std::string(name) + " has a non-finite level");
  }
  for (const auto* levels : {&d.fresh_levels, &d.circ_levels, &d.tap_levels})
    for (double x : *levels)
      if (x < 0.0 || x > 1.0) throw ValidationError("actuator levels must lie in [0, 1]");
  if (d.repetitions < 1) throw ValidationError("design produces 0 cells: repetitions must be >= 1");
  if (d.settle_steps < 0) throw ValidationError("settle_steps must be >= 0");
}

double step(double current_temp, const Controls& c, const HallParams& p, Rng* noise) {
  const double flux = p.k_water * c.water_tap * (c.water_temp - current_temp) +
                      p.k_fresh * c.fresh_damper * (c.ambient_temp - current_temp) +
                      p.compost_heat;
  double next = current_temp + p.dt * flux / p.thermal_capacity;
  if (noise != nullptr && p.noise_std > 0.0) next += noise->normal(0.0, p.noise_std);
  return next;
}

double settle(double start_temp, const Controls& controls, const HallParams& params, int steps) {
  double t = start_temp;
  for (int i = 0; i < steps; ++i) t = step(t, controls, params);
  return t;
}

Dataset generate(const TreatmentDesign& design, const HallParams& params, std::uint64_t seed,
                 bool parallel) {
  validate(design);
  validate(params);

  const std::size_t reps = static_cast<std::size_t>(design.repetitions);
  const std::size_t n_tap = design.tap_levels.size();
  const std::size_t n_circ = design.circ_levels.size();
  const std::size_t n_fresh = design.fresh_levels.size();
  const std::size_t n_water = design.water_levels.size();
  const std::size_t cells = design.cell_count();

  Dataset out;
  out.provenance = SyntheticSource{seed};
  out.samples.resize(cells);
  parallel_for(cells, parallel, [&](std::size_t cell) {
    std::size_t r = cell;
    r /= reps;
    const std::size_t tap = r % n_tap;
    r /= n_tap;
    const std::size_t circ = r % n_circ;
    r /= n_circ;
    const std::size_t fresh = r % n_fresh;
    r /= n_fresh;
    const std::size_t water = r % n_water;
    r /= n_water;
    const std::size_t ambient = r;

    const Controls c{design.ambient_levels[ambient], design.water_levels[water],
                     design.fresh_levels[fresh], design.circ_levels[circ], design.tap_levels[tap]};
    double temp = settle(params.initial_temp, c, params, design.settle_steps);
    if (params.noise_std > 0.0) {
      Rng rng(derive_seed(seed, cell));
      temp += rng.normal(0.0, params.noise_std);
    }
    out.samples[cell] =
        Sample{c.ambient_temp, c.water_temp, c.fresh_damper, c.circ_damper, c.water_tap, temp};
  });
  return out;
}

}  // namespace hallnet::sim
