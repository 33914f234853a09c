#include "jamsim/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>

#include "jamsim/errors.hpp"
#include "jamsim/jammer.hpp"

namespace jamsim {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

SystemConfig<double> config_at(const Scenario& sc, double sweep_value, int tau) {
  SystemConfig<double> cfg = sc.base;
  cfg.pilot_len = tau;
  switch (sc.axis) {
    case SweepAxis::jam_power_db: {
      const double q = db_to_linear(sweep_value);
      cfg.pilot_power_jammer = q;
      cfg.data_power_jammer = q;
      break;
    }
    case SweepAxis::antennas:
      cfg.antennas = static_cast<int>(std::lround(sweep_value));
      break;
    case SweepAxis::pilot_len:
      cfg.pilot_len = static_cast<int>(std::lround(sweep_value));
      break;
  }
  cfg.validate();
  return cfg;
}

}  // namespace

void run_scenario(const Scenario& sc, std::ostream& out) {
  sc.validate();
  if (!sc.reproducible) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated " << stamp << "\n";
  }
  out << "sweep_value,tau,estimator,detector,se_route,sum_se,ci_halfwidth,"
         "n_outer,n_inner,seed,excluded_draws,validity_warning\n";

  for (double value : sc.sweep_values) {
    for (int tau : sc.tau_values) {
      const auto cfg = config_at(sc, value, tau);
      // The jammer ensemble for the analytic routes; keyed identically to
      // the Monte Carlo evaluator so all routes see the same draws.
      std::vector<JammerRealization<double>> draws;
      for (const auto& method : sc.methods) {
        SeResult<double> result;
        switch (method.route) {
          case SeRoute::monte_carlo: {
            MonteCarloOptions opts;
            opts.n_outer = sc.n_outer;
            opts.n_inner = sc.n_inner;
            opts.mode = ParamMode::estimated;
            opts.threads = sc.threads;
            result = se_monte_carlo(cfg, method.estimator, method.detector, opts);
            break;
          }
          case SeRoute::closed_form:
          case SeRoute::asymptotic: {
            if (draws.empty()) draws = draw_jammer_ensemble(cfg, sc.n_outer);
            result = method.route == SeRoute::closed_form ? se_closed_form(cfg, draws)
                                                          : asymptotic_se(cfg, draws);
            break;
          }
        }
        out << format_number(value) << ',' << cfg.pilot_len << ','
            << to_string(method.estimator) << ',' << to_string(method.detector) << ','
            << to_string(method.route) << ','
            << (result.unbounded ? "inf" : format_number(result.sum)) << ','
            << (result.unbounded ? "0" : format_number(result.summed_ci())) << ','
            << result.n_outer << ',' << result.n_inner << ',' << cfg.seed << ','
            << result.excluded_draws << ',' << (result.validity_warning ? 1 : 0)
            << '\n';
      }
    }
  }
}

void run_scenario(const Scenario& sc) {
  std::ofstream out(sc.out_path);
  if (!out) throw Error("cannot open output file '" + sc.out_path + "'");
  run_scenario(sc, out);
  out.flush();
  if (!out) throw Error("failed writing output file '" + sc.out_path + "'");
}

}  // namespace jamsim
