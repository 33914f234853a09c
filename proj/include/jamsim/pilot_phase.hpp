#pragma once

#include "jamsim/channel.hpp"
#include "jamsim/errors.hpp"
#include "jamsim/jammer.hpp"
#include "jamsim/pilot_book.hpp"

namespace jamsim {

/// Received pilot-phase block and its projections on every pilot.
///
/// The raw noise matrix is retained purely so tests can decompose the signal
/// exactly; production code never reads it. Projections are precomputed for
/// all tau pilots since every consumer needs them and tau is small.
template <class Scalar = double>
struct PilotObservation {
  ComplexMatrix<Scalar> received;     // Y, M x tau
  ComplexMatrix<Scalar> noise;        // N, M x tau (oracle use only)
  ComplexMatrix<Scalar> projections;  // column i = Y phi_i^*, M x tau
};

/// Assembles Y = sqrt(tau p_t) sum_k h_k phi_{a(k)}^T
///             + sqrt(tau q_t) h_w psi^T + N
/// from an externally supplied noise matrix (the zero matrix makes the
/// noiseless decompositions exact, which is what the oracle tests use).
template <class Scalar = double>
PilotObservation<Scalar> assemble_pilot_observation(const ChannelSet<Scalar>& channels,
                                                    const JammerRealization<Scalar>& jam,
                                                    const PilotBook<Scalar>& book,
                                                    const SystemConfig<Scalar>& cfg,
                                                    ComplexMatrix<Scalar> noise) {
  const Index m = cfg.antennas;
  const Index tau = cfg.pilot_len;
  if (channels.users.rows() != m || channels.users.cols() != cfg.users ||
      channels.jammer.size() != m || jam.sequence.size() != tau ||
      book.pilots.rows() != tau || noise.rows() != m || noise.cols() != tau) {
    throw Error("assemble_pilot_observation: dimension mismatch");
  }

  PilotObservation<Scalar> obs;
  obs.received = std::move(noise);
  obs.noise = obs.received;

  const Scalar amp_user = std::sqrt(Scalar(tau) * cfg.pilot_power_user);
  const Scalar amp_jam = std::sqrt(Scalar(tau) * cfg.pilot_power_jammer);
  for (int k = 0; k < cfg.users; ++k) {
    obs.received.noalias() +=
        amp_user * channels.users.col(k) * book.pilots.col(book.user_pilot(k)).transpose();
  }
  obs.received.noalias() += amp_jam * channels.jammer * jam.sequence.transpose();

  obs.projections.noalias() = obs.received * book.pilots.conjugate();
  return obs;
}

template <class Scalar = double>
PilotObservation<Scalar> receive_pilots(const ChannelSet<Scalar>& channels,
                                        const JammerRealization<Scalar>& jam,
                                        const PilotBook<Scalar>& book,
                                        const SystemConfig<Scalar>& cfg,
                                        RngStream& rng) {
  ComplexMatrix<Scalar> noise(cfg.antennas, cfg.pilot_len);
  for (Index j = 0; j < noise.cols(); ++j)
    for (Index i = 0; i < noise.rows(); ++i)
      noise(i, j) = Complex<Scalar>(rng.cgauss(1.0));
  return assemble_pilot_observation(channels, jam, book, cfg, std::move(noise));
}

/// Projection of the received block on pilot `pilot_index` (precomputed).
template <class Scalar = double>
ComplexVector<Scalar> project(const PilotObservation<Scalar>& obs, int pilot_index) {
  if (pilot_index < 0 || pilot_index >= obs.projections.cols())
    throw std::out_of_range("project: pilot index out of range");
  return obs.projections.col(pilot_index);
}

}  // namespace jamsim
