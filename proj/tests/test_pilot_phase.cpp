#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jamsim/pilot_phase.hpp"

using namespace jamsim;

namespace {

struct Setup {
  SystemConfig<> cfg;
  PilotBook<> book;
  ChannelSet<> channels;
  JammerRealization<> jam;
};

Setup make_setup(int antennas, int users, int pilot_len, double p_t, double q_t,
                 std::uint64_t seed = 0, std::uint64_t block = 0) {
  Setup s;
  s.cfg = make_uniform_config<double>(antennas, users, pilot_len, 200, p_t, 1.0, q_t, 1.0);
  s.cfg.seed = seed;
  auto rb = RngStream::derive(seed, block, StreamTag::pilot_assignment);
  s.book = build_pilot_book(pilot_len, false, rb);
  auto rc = RngStream::derive(seed, block, StreamTag::channels);
  s.channels = draw_channels(s.cfg, rc);
  auto rj = RngStream::derive(seed, block, StreamTag::jammer_sequence);
  s.jam = draw_jammer_sequence(s.cfg, s.book, rj);
  return s;
}

ComplexMatrix<> zero_noise(const SystemConfig<>& cfg) {
  return ComplexMatrix<>::Zero(cfg.antennas, cfg.pilot_len);
}

}  // namespace

TEST_CASE("all-zero powers and noise give a zero observation") {
  auto s = make_setup(16, 2, 4, /*p_t=*/0.0, /*q_t=*/0.0);
  auto obs = assemble_pilot_observation(s.channels, s.jam, s.book, s.cfg, zero_noise(s.cfg));
  CHECK(obs.received.cwiseAbs().maxCoeff() == 0.0);
  CHECK(obs.projections.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("orthonormal projection isolates a lone user") {
  auto s = make_setup(16, 1, 3, /*p_t=*/2.0, /*q_t=*/0.0);
  auto obs = assemble_pilot_observation(s.channels, s.jam, s.book, s.cfg, zero_noise(s.cfg));
  const ComplexVector<> expected =
      std::sqrt(3.0 * 2.0) * s.channels.users.col(0);
  CHECK((project(obs, s.book.user_pilot(0)) - expected).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unused-pilot projection matches a matrix-free evaluation") {
  auto s = make_setup(24, 1, 3, /*p_t=*/0.0, /*q_t=*/1.0);
  auto obs = assemble_pilot_observation(s.channels, s.jam, s.book, s.cfg, zero_noise(s.cfg));

  for (int i : s.book.unused_pilots(s.cfg.users)) {
    // Independent elementwise evaluation of both the projection and the
    // overlap, then of sqrt(tau) * alpha_i * h_w.
    std::complex<double> alpha = 0;
    for (int n = 0; n < 3; ++n) alpha += s.jam.sequence[n] * std::conj(s.book.pilots(n, i));
    for (int m = 0; m < 24; ++m) {
      std::complex<double> proj = 0;
      for (int n = 0; n < 3; ++n) proj += obs.received(m, n) * std::conj(s.book.pilots(n, i));
      const std::complex<double> expected = std::sqrt(3.0) * alpha * s.channels.jammer[m];
      CHECK(std::abs(obs.projections(m, i) - proj) < 1e-10);
      CHECK(std::abs(obs.projections(m, i) - expected) < 1e-10);
    }
  }
}

TEST_CASE("assigned-pilot projection decomposes into its stored parts") {
  auto s = make_setup(16, 2, 4, /*p_t=*/1.5, /*q_t=*/0.8, /*seed=*/3);
  auto rng = RngStream::derive(s.cfg.seed, 0, StreamTag::pilot_noise);
  auto obs = receive_pilots(s.channels, s.jam, s.book, s.cfg, rng);

  for (int k = 0; k < s.cfg.users; ++k) {
    const int pilot = s.book.user_pilot(k);
    const ComplexVector<> noise_proj = obs.noise * s.book.pilots.col(pilot).conjugate();
    const ComplexVector<> expected = std::sqrt(4.0 * 1.5) * s.channels.users.col(k) +
                                     std::sqrt(4.0 * 0.8) * s.jam.overlaps[pilot] *
                                         s.channels.jammer +
                                     noise_proj;
    CHECK((project(obs, pilot) - expected).cwiseAbs().maxCoeff() < 1e-10);
  }

  // Idempotent, read-only access.
  CHECK(project(obs, 1) == project(obs, 1));
  CHECK_THROWS_AS(project(obs, 4), std::out_of_range);
  CHECK_THROWS_AS(project(obs, -1), std::out_of_range);
}

TEST_CASE("unused pilot carries nothing without a jammer") {
  auto s = make_setup(16, 1, 3, /*p_t=*/1.0, /*q_t=*/0.0);
  auto obs = assemble_pilot_observation(s.channels, s.jam, s.book, s.cfg, zero_noise(s.cfg));
  for (int i : s.book.unused_pilots(1))
    CHECK(project(obs, i).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("projections conserve the received energy") {
  for (std::uint64_t block = 0; block < 20; ++block) {
    auto s = make_setup(20, 3, 5, 1.3, 0.7, /*seed=*/11, block);
    auto rng = RngStream::derive(s.cfg.seed, block, StreamTag::pilot_noise);
    auto obs = receive_pilots(s.channels, s.jam, s.book, s.cfg, rng);
    const double total = obs.received.squaredNorm();
    const double projected = obs.projections.squaredNorm();
    CHECK(std::abs(total - projected) <= 1e-8 * total);
  }
}

TEST_CASE("stored projections match recomputation from the block") {
  auto s = make_setup(32, 2, 4, 1.0, 1.0, /*seed=*/5);
  auto rng = RngStream::derive(s.cfg.seed, 0, StreamTag::pilot_noise);
  auto obs = receive_pilots(s.channels, s.jam, s.book, s.cfg, rng);
  const ComplexMatrix<> recomputed = obs.received * s.book.pilots.conjugate();
  CHECK((recomputed - obs.projections).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unused-pilot projections have covariance (J_i + 1) I") {
  const int m = 8, n_trials = 20000;
  auto s = make_setup(m, 1, 2, /*p_t=*/1.0, /*q_t=*/2.0, /*seed=*/19);
  const int unused = s.book.unused_pilots(1)[0];
  const double jam_power = s.jam.jam_power[unused];

  ComplexMatrix<> cov = ComplexMatrix<>::Zero(m, m);
  for (int rep = 0; rep < n_trials; ++rep) {
    auto rc = RngStream::derive(7, static_cast<std::uint64_t>(rep), StreamTag::channels);
    auto channels = draw_channels(s.cfg, rc);
    auto rn = RngStream::derive(7, static_cast<std::uint64_t>(rep), StreamTag::pilot_noise);
    auto obs = receive_pilots(channels, s.jam, s.book, s.cfg, rn);
    const ComplexVector<> y = project(obs, unused);
    cov.noalias() += y * y.adjoint();
  }
  cov /= double(n_trials);

  const double target = jam_power + 1.0;
  CHECK(std::abs(cov.diagonal().real().mean() - target) < 0.03 * target);
  ComplexMatrix<> off = cov;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 0.06 * target);
}

TEST_CASE("dimension mismatches are contract violations") {
  auto s = make_setup(16, 2, 4, 1.0, 1.0);
  ComplexMatrix<> bad_noise = ComplexMatrix<>::Zero(8, 4);
  CHECK_THROWS_AS(
      assemble_pilot_observation(s.channels, s.jam, s.book, s.cfg, bad_noise), Error);
}
