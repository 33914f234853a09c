#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>

#include "jamsim/errors.hpp"
#include "jamsim/types.hpp"

namespace jamsim {

/// Scenario parameters for one operating point of the uplink.
///
/// All powers are linear scale; the receiver noise is normalized to unit
/// variance, so powers double as SNRs. Large-scale fading is i.i.d. per
/// antenna (h ~ CN(0, beta I)).
template <class Scalar = double>
struct SystemConfig {
  int antennas = 0;   // M, base-station array size
  int users = 0;      // K, single-antenna users
  int pilot_len = 0;  // tau, pilot length == pilot count
  int block_len = 0;  // T, coherence block length in samples

  Scalar pilot_power_user{};    // p_t
  Scalar data_power_user{};     // p_d
  Scalar pilot_power_jammer{};  // q_t
  Scalar data_power_jammer{};   // q_d

  RealVector<Scalar> beta_users;  // per-user large-scale fading, length K
  Scalar beta_jammer{1};

  std::uint64_t seed = 0;
  bool pilot_hopping = false;

  /// Throws ConfigError on any violated invariant.
  void validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (users < 1) fail("users must be >= 1");
    if (pilot_len < 1) fail("pilot_len must be >= 1");
    if (users > pilot_len - 1)
      fail("users must be <= pilot_len - 1 (at least one unused pilot required)");
    if (block_len < pilot_len) fail("block_len must be >= pilot_len");
    if (antennas <= users + 1) fail("antennas must exceed users + 1");
    auto check_power = [&](Scalar v, const char* name) {
      if (!std::isfinite(static_cast<double>(v)) || v < Scalar(0)) {
        std::ostringstream os;
        os << name << " must be finite and non-negative";
        fail(os.str());
      }
    };
    check_power(pilot_power_user, "pilot_power_user");
    check_power(data_power_user, "data_power_user");
    check_power(pilot_power_jammer, "pilot_power_jammer");
    check_power(data_power_jammer, "data_power_jammer");
    check_power(beta_jammer, "beta_jammer");
    if (beta_users.size() != users) fail("beta_users must have one entry per user");
    for (Index k = 0; k < beta_users.size(); ++k)
      check_power(beta_users[k], "beta_users entry");
  }
};

/// Convenience builder with uniform fading (the normalization used in the
/// reference experiments: every beta equal to one).
template <class Scalar = double>
SystemConfig<Scalar> make_uniform_config(int antennas, int users, int pilot_len,
                                         int block_len, Scalar p_t, Scalar p_d,
                                         Scalar q_t, Scalar q_d, Scalar beta = Scalar(1),
                                         std::uint64_t seed = 0) {
  SystemConfig<Scalar> cfg;
  cfg.antennas = antennas;
  cfg.users = users;
  cfg.pilot_len = pilot_len;
  cfg.block_len = block_len;
  cfg.pilot_power_user = p_t;
  cfg.data_power_user = p_d;
  cfg.pilot_power_jammer = q_t;
  cfg.data_power_jammer = q_d;
  cfg.beta_users = RealVector<Scalar>::Constant(users, beta);
  cfg.beta_jammer = beta;
  cfg.seed = seed;
  return cfg;
}

}  // namespace jamsim
