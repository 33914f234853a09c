#pragma once

#include "jamsim/config.hpp"
#include "jamsim/rng.hpp"
#include "jamsim/types.hpp"

namespace jamsim {

/// Block-fading channel realizations: column k of `users` is h_k ~
/// CN(0, beta_k I_M); `jammer` is h_w ~ CN(0, beta_w I_M).
template <class Scalar = double>
struct ChannelSet {
  ComplexMatrix<Scalar> users;   // M x K
  ComplexVector<Scalar> jammer;  // M
};

/// Draw order is fixed (user columns first, then the jammer, entries top to
/// bottom) so a given stream always yields the same realization.
template <class Scalar = double>
ChannelSet<Scalar> draw_channels(const SystemConfig<Scalar>& cfg, RngStream& rng) {
  const Index m = cfg.antennas;
  ChannelSet<Scalar> ch;
  ch.users.resize(m, cfg.users);
  for (Index k = 0; k < cfg.users; ++k) {
    const double var = static_cast<double>(cfg.beta_users[k]);
    for (Index i = 0; i < m; ++i)
      ch.users(i, k) = Complex<Scalar>(rng.cgauss(var));
  }
  ch.jammer.resize(m);
  const double var_w = static_cast<double>(cfg.beta_jammer);
  for (Index i = 0; i < m; ++i) ch.jammer[i] = Complex<Scalar>(rng.cgauss(var_w));
  return ch;
}

}  // namespace jamsim
