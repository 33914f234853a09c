#pragma once

#include <cmath>
#include <sstream>

#include "jamsim/channel.hpp"
#include "jamsim/errors.hpp"
#include "jamsim/estimation.hpp"

namespace jamsim {

enum class CombinerKind { mf, zf, zfjs };

/// Received data-phase vector with the transmitted symbols and noise kept
/// for oracle decompositions.
template <class Scalar = double>
struct DataObservation {
  ComplexVector<Scalar> received;  // y_d, length M
  ComplexVector<Scalar> symbols;   // user symbols, length K
  Complex<Scalar> jam_symbol{};
  ComplexVector<Scalar> noise;  // retained, oracle use only
};

/// Unit-power symbols: QPSK by default, circular Gaussian codebook when
/// requested.
template <class Scalar = double>
ComplexVector<Scalar> draw_symbols(Index count, RngStream& rng, bool gaussian = false) {
  ComplexVector<Scalar> symbols(count);
  if (gaussian) {
    for (Index i = 0; i < count; ++i) symbols[i] = Complex<Scalar>(rng.cgauss(1.0));
    return symbols;
  }
  const Scalar amp = Scalar(1) / std::sqrt(Scalar(2));
  for (Index i = 0; i < count; ++i) {
    const auto bits = rng.next();
    symbols[i] = Complex<Scalar>(bits & 1 ? amp : -amp, bits & 2 ? amp : -amp);
  }
  return symbols;
}

template <class Scalar = double>
DataObservation<Scalar> assemble_data_observation(const ChannelSet<Scalar>& channels,
                                                  const SystemConfig<Scalar>& cfg,
                                                  ComplexVector<Scalar> symbols,
                                                  Complex<Scalar> jam_symbol,
                                                  ComplexVector<Scalar> noise) {
  if (symbols.size() != cfg.users || noise.size() != cfg.antennas)
    throw Error("assemble_data_observation: dimension mismatch");
  DataObservation<Scalar> obs;
  obs.received = std::move(noise);
  obs.noise = obs.received;
  obs.received.noalias() +=
      std::sqrt(cfg.data_power_user) * (channels.users * symbols);
  obs.received += std::sqrt(cfg.data_power_jammer) * jam_symbol * channels.jammer;
  obs.symbols = std::move(symbols);
  obs.jam_symbol = jam_symbol;
  return obs;
}

template <class Scalar = double>
DataObservation<Scalar> receive_data(const ChannelSet<Scalar>& channels,
                                     const SystemConfig<Scalar>& cfg,
                                     ComplexVector<Scalar> symbols,
                                     Complex<Scalar> jam_symbol, RngStream& rng) {
  ComplexVector<Scalar> noise(cfg.antennas);
  for (Index i = 0; i < noise.size(); ++i) noise[i] = Complex<Scalar>(rng.cgauss(1.0));
  return assemble_data_observation(channels, cfg, std::move(symbols), jam_symbol,
                                   std::move(noise));
}

/// Receive combining matrix. For the jamming-suppressing zero-forcer the
/// weights satisfy V^H [h_1 ... h_K h_jam] = I_{K+1}, so both inter-user and
/// jamming interference are nulled through the estimates.
template <class Scalar = double>
struct Combiner {
  ComplexMatrix<Scalar> weights;  // M x K (mf, zf) or M x (K+1) (zfjs)
  CombinerKind kind = CombinerKind::mf;
  Scalar gram_rcond{1};  // reciprocal condition estimate of the solved Gram
};

namespace detail {

/// V = H (H^H H)^{-1} via an LDLT factorization of the (tiny) Gram matrix.
/// The pivoted factorization's diagonal spread serves as the reciprocal
/// condition estimate; it is rank-revealing for the positive semidefinite
/// Gram, which Eigen's norm-based rcond() is not.
template <class Scalar>
Combiner<Scalar> pseudo_inverse_combiner(const ComplexMatrix<Scalar>& columns,
                                         CombinerKind kind) {
  ComplexMatrix<Scalar> gram = columns.adjoint() * columns;
  Eigen::LDLT<ComplexMatrix<Scalar>> ldlt(gram);
  const RealVector<Scalar> diag = ldlt.vectorD().real();
  const Scalar d_max = diag.maxCoeff();
  const Scalar d_min = diag.minCoeff();
  const Scalar rcond = d_max > Scalar(0) ? std::max(d_min / d_max, Scalar(0)) : Scalar(0);
  if (!(rcond > Scalar(1e-14)) || ldlt.info() != Eigen::Success) {
    std::ostringstream os;
    os << "combiner: estimate matrix is numerically singular (rcond ~ "
       << static_cast<double>(rcond) << ")";
    throw SingularCombinerError(os.str(), static_cast<double>(rcond));
  }
  Combiner<Scalar> comb;
  comb.kind = kind;
  comb.gram_rcond = rcond;
  comb.weights = ldlt.solve(columns.adjoint()).adjoint();
  return comb;
}

}  // namespace detail

template <class Scalar = double>
Combiner<Scalar> build_combiner(const EstimateSet<Scalar>& est, CombinerKind kind) {
  switch (kind) {
    case CombinerKind::mf: {
      Combiner<Scalar> comb;
      comb.kind = kind;
      comb.weights = est.users;
      return comb;
    }
    case CombinerKind::zf:
      return detail::pseudo_inverse_combiner(est.users, kind);
    case CombinerKind::zfjs: {
      if (est.jammer_eff.size() != est.users.rows())
        throw Error("build_combiner: zfjs needs a jammer-channel estimate");
      ComplexMatrix<Scalar> stacked(est.users.rows(), est.users.cols() + 1);
      stacked.leftCols(est.users.cols()) = est.users;
      stacked.col(est.users.cols()) = est.jammer_eff;
      return detail::pseudo_inverse_combiner(stacked, kind);
    }
  }
  throw Error("build_combiner: unknown kind");
}

/// Per-user symbol estimates: the first K entries of V^H y_d (the jammer
/// column of the zfjs combiner exists only to shape the nulls).
template <class Scalar = double>
ComplexVector<Scalar> combine(const Combiner<Scalar>& comb,
                              const DataObservation<Scalar>& obs) {
  if (comb.weights.rows() != obs.received.size())
    throw Error("combine: dimension mismatch");
  const Index users =
      comb.kind == CombinerKind::zfjs ? comb.weights.cols() - 1 : comb.weights.cols();
  return (comb.weights.adjoint() * obs.received).head(users);
}

/// Complex multiplications needed to form the zero-forcing jamming
/// suppression combiner.
inline long long count_zfjs(int antennas, int users) {
  if (antennas < 1 || users < 1) throw DomainError("count_zfjs: arguments must be >= 1");
  const long long n = users + 1;
  return static_cast<long long>(antennas) * n * n + (n * n * n - n) / 3;
}

}  // namespace jamsim
