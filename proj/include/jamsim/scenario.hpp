#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jamsim/config.hpp"
#include "jamsim/performance.hpp"

namespace jamsim {

enum class SweepAxis { jam_power_db, antennas, pilot_len };

/// One (estimator, detector, SE-route) triple evaluated per sweep point.
struct Method {
  EstimatorKind estimator = EstimatorKind::mmse_js;
  CombinerKind detector = CombinerKind::zfjs;
  SeRoute route = SeRoute::monte_carlo;
};

/// A full sweep description: base operating point, the axis swept, the
/// pilot-length variants evaluated at every point, and the methods compared.
struct Scenario {
  SystemConfig<double> base;
  SweepAxis axis = SweepAxis::jam_power_db;
  std::vector<double> sweep_values;
  std::vector<int> tau_values;  // defaults to {base.pilot_len}
  std::vector<Method> methods;
  long n_outer = 2000;
  long n_inner = 200;
  std::string out_path = "results.csv";
  bool reproducible = false;
  int threads = 0;

  void validate() const;
};

std::string to_string(EstimatorKind kind);
std::string to_string(CombinerKind kind);
std::string to_string(SeRoute route);
std::string to_string(SweepAxis axis);

/// Sum-SE versus jamming power: M=100, K=1, tau=3, user powers 5 dB,
/// q_t = q_d swept over 0..20 dB.
Scenario fig2_preset();

/// Sum-SE versus array size: K=2, all powers 2 dB, tau in {3,4,5},
/// M swept over 20..200.
Scenario fig3_preset();

Scenario preset_by_name(const std::string& name);

/// Key = value scenario parser ('#' comments). A `preset` key expands first;
/// any other keys override the preset's fields. Errors name the line.
Scenario parse_scenario(std::istream& in, const std::string& origin);
Scenario parse_scenario_file(const std::string& path);

}  // namespace jamsim
