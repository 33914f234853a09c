#pragma once

#include <vector>

#include "jamsim/config.hpp"
#include "jamsim/pilot_book.hpp"
#include "jamsim/rng.hpp"
#include "jamsim/types.hpp"

namespace jamsim {

/// One jamming sequence draw and its geometry against a pilot book.
///
/// overlaps[i] = psi^T phi_i^* covers every pilot, assigned or not, and
/// jam_power[i] = tau * q_t * |overlaps[i]|^2 * beta_w is the jamming power
/// landing on pilot direction i. `ratio` (delta_k) and `phase` (theta_k)
/// describe the leakage on user k's pilot relative to the unused pilot later
/// paired with that user; they stay empty until the pairing is chosen (see
/// fill_true_params in estimation.hpp).
template <class Scalar = double>
struct JammerRealization {
  ComplexVector<Scalar> sequence;  // psi_w, length tau
  ComplexVector<Scalar> overlaps;  // alpha_i, length tau
  RealVector<Scalar> jam_power;    // J_i, length tau
  std::vector<int> assignment;     // pilot assignment this draw was made against
  int users = 0;
  RealVector<Scalar> ratio;  // delta_k per user, filled by pairing step
  RealVector<Scalar> phase;  // theta_k per user, filled by pairing step
};

/// Draws psi_w ~ CN(0, (1/tau) I_tau), the equal-spreading strategy that
/// makes every pilot overlap nonzero with probability one while keeping
/// E|alpha_i|^2 = 1/tau.
template <class Scalar = double>
JammerRealization<Scalar> draw_jammer_sequence(const SystemConfig<Scalar>& cfg,
                                               const PilotBook<Scalar>& book,
                                               RngStream& rng) {
  const Index tau = cfg.pilot_len;
  JammerRealization<Scalar> jam;
  jam.sequence.resize(tau);
  const double var = 1.0 / static_cast<double>(tau);
  for (Index i = 0; i < tau; ++i) jam.sequence[i] = Complex<Scalar>(rng.cgauss(var));

  // alpha_i = psi^T phi_i^*; with Eigen's dot this is pilots.col(i).dot(psi).
  jam.overlaps.resize(tau);
  jam.jam_power.resize(tau);
  const Scalar scale = Scalar(tau) * cfg.pilot_power_jammer * cfg.beta_jammer;
  for (Index i = 0; i < tau; ++i) {
    jam.overlaps[i] = book.pilots.col(i).dot(jam.sequence);
    jam.jam_power[i] = scale * std::norm(jam.overlaps[i]);
  }
  jam.assignment = book.assignment;
  jam.users = cfg.users;
  return jam;
}

/// Ensemble of independent per-block draws, stream-keyed exactly like the
/// Monte Carlo evaluator so that same-seed runs see the same jammers.
template <class Scalar = double>
std::vector<JammerRealization<Scalar>> draw_jammer_ensemble(
    const SystemConfig<Scalar>& cfg, long n_draws) {
  std::vector<JammerRealization<Scalar>> draws;
  draws.reserve(static_cast<size_t>(n_draws));
  for (long j = 0; j < n_draws; ++j) {
    auto rng_book = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(j),
                                      StreamTag::pilot_assignment);
    const auto book = build_pilot_book<Scalar>(cfg.pilot_len, cfg.pilot_hopping, rng_book);
    auto rng_jam = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(j),
                                     StreamTag::jammer_sequence);
    draws.push_back(draw_jammer_sequence(cfg, book, rng_jam));
  }
  return draws;
}

}  // namespace jamsim
