#include <cmath>

#include "ewbem/driver.hpp"

namespace ewbem {

double RodOracle::wave_speed() const { return std::sqrt(young / rho); }

double RodOracle::free_end_displacement(double t) const {
  if (t <= 0.0) return 0.0;
  const double period4 = period();
  const double s = std::fmod(t, period4) / period4;  // phase in [0, 1)
  const double tri = s < 0.5 ? 2.0 * s : 2.0 * (1.0 - s);
  return tri * peak_displacement();
}

double RodOracle::fixed_end_stress(double t) const {
  if (t <= 0.0) return 0.0;
  const double travel = length / wave_speed();
  const double s = std::fmod(t, 4.0 * travel) / travel;  // in [0, 4)
  constexpr double tie = 1e-12;
  if (std::abs(s - 1.0) < tie || std::abs(s - 3.0) < tie) return load;
  return (s > 1.0 && s < 3.0) ? 2.0 * load : 0.0;
}

double RodOracle::distance_to_jump(double t) const {
  const double travel = length / wave_speed();
  // Jumps at (2m + 1) L/c.
  const double shifted = t - travel;
  const double m = std::round(shifted / (2.0 * travel));
  return std::abs(shifted - 2.0 * travel * m);
}

RodResponse analytic_rod_oracle(double length, double young, double rho, double load,
                                const std::vector<double>& times) {
  if (!(length > 0.0 && young > 0.0 && rho > 0.0)) throw ConfigError("rod oracle needs positive L, E and rho");
  const RodOracle rod{length, young, rho, load};
  RodResponse out;
  for (double t : times) {
    out.free_end_displacement.push_back(rod.free_end_displacement(t));
    out.fixed_end_stress.push_back(rod.fixed_end_stress(t));
  }
  return out;
}

RodOracle rod_oracle_for(const Material& material, double length, double load) {
  if (material.lambda() != 0.0) {
    throw ConfigError("the 1-D rod solution needs nu = 0 (no lateral coupling)");
  }
  return RodOracle{length, material.young(), material.rho(), load};
}

}  // namespace ewbem
