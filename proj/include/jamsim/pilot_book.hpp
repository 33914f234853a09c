#pragma once

#include <numbers>
#include <numeric>
#include <vector>

#include "jamsim/errors.hpp"
#include "jamsim/rng.hpp"
#include "jamsim/types.hpp"

namespace jamsim {

/// Orthonormal pilot set plus the user-to-pilot assignment of one block.
///
/// Column i of `pilots` is pilot i. `assignment` is a permutation of
/// {0, ..., tau-1}; the first K entries are the pilots transmitted by users
/// 0..K-1, the remaining entries are the unused pilots of this block.
template <class Scalar = double>
struct PilotBook {
  ComplexMatrix<Scalar> pilots;
  std::vector<int> assignment;

  int user_pilot(int user) const { return assignment.at(static_cast<size_t>(user)); }

  std::vector<int> unused_pilots(int users) const {
    return {assignment.begin() + users, assignment.end()};
  }
};

/// Builds the pilot set as the unit-norm DFT columns of size tau, which are
/// orthonormal under the convention phi_i^T phi_j^* = delta_ij. Without
/// hopping the assignment is the identity; with hopping it is a fresh
/// uniform permutation.
template <class Scalar = double>
PilotBook<Scalar> build_pilot_book(int pilot_len, bool hopping, RngStream& rng) {
  if (pilot_len < 1) throw ConfigError("build_pilot_book: pilot_len must be >= 1");
  const Index tau = pilot_len;

  PilotBook<Scalar> book;
  book.pilots.resize(tau, tau);
  const Scalar norm = Scalar(1) / std::sqrt(Scalar(tau));
  for (Index j = 0; j < tau; ++j) {
    for (Index n = 0; n < tau; ++n) {
      const Scalar angle = Scalar(-2) * std::numbers::pi_v<Scalar> *
                           Scalar(j) * Scalar(n) / Scalar(tau);
      book.pilots(n, j) = norm * Complex<Scalar>(std::cos(angle), std::sin(angle));
    }
  }

  book.assignment.resize(static_cast<size_t>(tau));
  std::iota(book.assignment.begin(), book.assignment.end(), 0);
  if (hopping) {
    for (Index i = tau - 1; i > 0; --i) {
      const auto j = rng.bounded(static_cast<std::uint64_t>(i) + 1);
      std::swap(book.assignment[static_cast<size_t>(i)],
                book.assignment[static_cast<size_t>(j)]);
    }
  }
  return book;
}

}  // namespace jamsim
