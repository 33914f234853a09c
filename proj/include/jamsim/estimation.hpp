#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "jamsim/errors.hpp"
#include "jamsim/pilot_phase.hpp"

namespace jamsim {

/// Whether jamming parameters come from the blind estimators or are copied
/// from the underlying realization (the latter isolates the estimator error
/// laws in tests).
enum class ParamMode { genie, estimated };

/// Wraps an angle to (-pi, pi].
template <class Scalar>
Scalar wrap_angle(Scalar x) {
  return std::arg(Complex<Scalar>(std::cos(x), std::sin(x)));
}

/// Jamming-side quantities the jamming-suppressing estimator needs:
/// per-pilot jamming power, the per-user leakage ratio/phase against the
/// paired unused pilot, and the pairing itself.
template <class Scalar = double>
struct JammingParams {
  RealVector<Scalar> jam_power;    // length tau, zero at assigned pilots
  RealVector<Scalar> ratio;        // delta_k >= 0 per user
  RealVector<Scalar> phase;        // theta_k in (-pi, pi] per user
  int strongest_unused = -1;       // pilot used for the jammer channel estimate
  std::vector<int> paired_unused;  // pilot paired with each user
  ParamMode mode = ParamMode::estimated;
};

/// Channel estimates for one block plus their nominal error statistics.
template <class Scalar = double>
struct EstimateSet {
  ComplexMatrix<Scalar> users;       // M x K, column k = estimate of h_k
  ComplexVector<Scalar> jammer_eff;  // estimate of the jammer's effective channel
  RealVector<Scalar> err_var_users;  // per-entry error variance, per user
  Scalar err_var_jammer{};
  JammingParams<Scalar> params;
};

struct UnusedPilotPlan {
  int strongest = -1;       // argmax of jam power over unused pilots
  std::vector<int> paired;  // per-user unused pilot
};

/// Selects which unused pilots serve the jammer estimate and each user's
/// contamination cancellation.
///
/// The jammer takes the unused pilot with the largest jamming power (lowest
/// normalized estimation error). Users are dealt the unused pilots
/// round-robin in descending jamming power, starting after the jammer's
/// pilot and wrapping onto it only when the others run out. Distinctness
/// comes first because shared projections correlate the estimation errors,
/// which is what costs spectral efficiency; within that, a stronger paired
/// pilot means a smaller leakage ratio and a smaller estimation error. Ties
/// break toward the lowest pilot index so runs are reproducible.
template <class Scalar = double>
UnusedPilotPlan assign_unused_pilots(const RealVector<Scalar>& jam_power,
                                     const std::vector<int>& unused, int users) {
  if (unused.empty()) throw ConfigError("assign_unused_pilots: no unused pilot available");

  auto stronger = [&](int a, int b) {
    if (jam_power[a] != jam_power[b]) return jam_power[a] > jam_power[b];
    return a < b;
  };

  std::vector<int> pool = unused;  // descending, jammer's pilot first
  std::sort(pool.begin(), pool.end(), stronger);

  UnusedPilotPlan plan;
  plan.strongest = pool.front();
  if (pool.size() > 1) std::rotate(pool.begin(), pool.begin() + 1, pool.end());

  plan.paired.resize(static_cast<size_t>(users));
  for (int k = 0; k < users; ++k)
    plan.paired[static_cast<size_t>(k)] = pool[static_cast<size_t>(k) % pool.size()];
  return plan;
}

/// Blind estimation from one pilot-phase observation. Order matters: the
/// per-pilot jamming powers are estimated first, the pairing is derived from
/// them, and only then can the per-user ratio/phase be formed against the
/// paired projections.
template <class Scalar = double>
JammingParams<Scalar> estimate_jamming_params(const PilotObservation<Scalar>& obs,
                                              const PilotBook<Scalar>& book,
                                              const SystemConfig<Scalar>& cfg) {
  const Scalar m = Scalar(cfg.antennas);
  const auto unused = book.unused_pilots(cfg.users);

  JammingParams<Scalar> params;
  params.mode = ParamMode::estimated;
  params.jam_power = RealVector<Scalar>::Zero(cfg.pilot_len);
  for (int i : unused) {
    params.jam_power[i] =
        std::max(Scalar(0), obs.projections.col(i).squaredNorm() / m - Scalar(1));
  }

  const auto plan = assign_unused_pilots(params.jam_power, unused, cfg.users);
  params.strongest_unused = plan.strongest;
  params.paired_unused = plan.paired;

  params.ratio.resize(cfg.users);
  params.phase.resize(cfg.users);
  for (int k = 0; k < cfg.users; ++k) {
    const auto y_user = obs.projections.col(book.user_pilot(k));
    const auto y_pair = obs.projections.col(plan.paired[static_cast<size_t>(k)]);
    const Scalar pair_excess = y_pair.squaredNorm() / m - Scalar(1);
    if (pair_excess > Scalar(0)) {
      const Scalar user_excess =
          std::max(Scalar(0), y_user.squaredNorm() / m -
                                  Scalar(cfg.pilot_len) * cfg.pilot_power_user *
                                      cfg.beta_users[k] -
                                  Scalar(1));
      params.ratio[k] = std::sqrt(user_excess / pair_excess);
    } else {
      params.ratio[k] = Scalar(0);
    }
    params.phase[k] = std::arg(y_pair.dot(y_user) / m);
  }
  return params;
}

/// Same pairing policy as the blind path, but every quantity is copied from
/// the realization itself.
template <class Scalar = double>
JammingParams<Scalar> genie_jamming_params(const JammerRealization<Scalar>& jam) {
  const int users = jam.users;
  const std::vector<int> unused(jam.assignment.begin() + users, jam.assignment.end());

  JammingParams<Scalar> params;
  params.mode = ParamMode::genie;
  params.jam_power = RealVector<Scalar>::Zero(jam.jam_power.size());
  for (int i : unused) params.jam_power[i] = jam.jam_power[i];

  const auto plan = assign_unused_pilots(params.jam_power, unused, users);
  params.strongest_unused = plan.strongest;
  params.paired_unused = plan.paired;

  params.ratio.resize(users);
  params.phase.resize(users);
  for (int k = 0; k < users; ++k) {
    // With no jamming energy on the paired pilot there is nothing to cancel
    // and the optimal subtraction coefficient is zero (the blind estimator's
    // clipped branch reaches the same conclusion).
    if (jam.jam_power[plan.paired[static_cast<size_t>(k)]] <= Scalar(0)) {
      params.ratio[k] = Scalar(0);
      params.phase[k] = Scalar(0);
      continue;
    }
    const auto a_user = jam.overlaps[jam.assignment[static_cast<size_t>(k)]];
    const auto a_pair = jam.overlaps[plan.paired[static_cast<size_t>(k)]];
    params.ratio[k] = std::abs(a_user) / std::abs(a_pair);
    params.phase[k] = wrap_angle(std::arg(a_user) - std::arg(a_pair));
  }
  return params;
}

/// Records the true leakage ratio/phase on the realization once the pairing
/// is known.
template <class Scalar = double>
void fill_true_params(JammerRealization<Scalar>& jam) {
  const auto params = genie_jamming_params(jam);
  jam.ratio = params.ratio;
  jam.phase = params.phase;
}

/// Linear MMSE estimate of user k's channel from the projection on its own
/// pilot. The receiver does not know the realized overlap, so the prior
/// E|alpha|^2 = 1/tau (equal power spreading) enters the scale factor.
template <class Scalar = double>
ComplexVector<Scalar> lmmse_estimate(const PilotObservation<Scalar>& obs,
                                     const PilotBook<Scalar>& book, int user,
                                     const SystemConfig<Scalar>& cfg) {
  const Scalar tau = Scalar(cfg.pilot_len);
  const Scalar beta = cfg.beta_users[user];
  const Scalar scale =
      std::sqrt(tau * cfg.pilot_power_user) * beta /
      (Scalar(1) + cfg.pilot_power_jammer * cfg.beta_jammer +
       tau * cfg.pilot_power_user * beta);
  return scale * obs.projections.col(book.user_pilot(user));
}

/// Jamming-suppressing MMSE estimate of user k's channel: subtract the
/// phase-aligned, ratio-scaled paired projection to cancel the jammer's
/// contamination, then apply the MMSE scale.
template <class Scalar = double>
ComplexVector<Scalar> mmse_js_user(const PilotObservation<Scalar>& obs,
                                   const PilotBook<Scalar>& book, int user,
                                   const JammingParams<Scalar>& params,
                                   const SystemConfig<Scalar>& cfg) {
  const Scalar tau = Scalar(cfg.pilot_len);
  const Scalar beta = cfg.beta_users[user];
  const Scalar delta = params.ratio[user];
  const Scalar scale = std::sqrt(tau * cfg.pilot_power_user) * beta /
                       (Scalar(1) + delta * delta + tau * cfg.pilot_power_user * beta);
  const Complex<Scalar> rot =
      delta * Complex<Scalar>(std::cos(params.phase[user]), std::sin(params.phase[user]));
  return scale * (obs.projections.col(book.user_pilot(user)) -
                  rot * obs.projections.col(params.paired_unused[static_cast<size_t>(user)]));
}

/// MMSE estimate of the jammer's effective channel from the strongest unused
/// pilot: shrink that projection by J/(1+J).
template <class Scalar = double>
ComplexVector<Scalar> mmse_js_jammer(const PilotObservation<Scalar>& obs,
                                     const JammingParams<Scalar>& params) {
  const Scalar jp = params.jam_power[params.strongest_unused];
  return (jp / (Scalar(1) + jp)) * obs.projections.col(params.strongest_unused);
}

/// Full jamming-suppressing estimate set: every user plus the jammer, with
/// the nominal error variances implied by the parameters in use.
template <class Scalar = double>
EstimateSet<Scalar> mmse_js_estimates(const PilotObservation<Scalar>& obs,
                                      const PilotBook<Scalar>& book,
                                      const JammingParams<Scalar>& params,
                                      const SystemConfig<Scalar>& cfg) {
  EstimateSet<Scalar> est;
  est.users.resize(cfg.antennas, cfg.users);
  est.err_var_users.resize(cfg.users);
  const Scalar tau = Scalar(cfg.pilot_len);
  for (int k = 0; k < cfg.users; ++k) {
    est.users.col(k) = mmse_js_user(obs, book, k, params, cfg);
    const Scalar beta = cfg.beta_users[k];
    const Scalar d2 = params.ratio[k] * params.ratio[k];
    est.err_var_users[k] =
        (Scalar(1) + d2) * beta / (Scalar(1) + d2 + tau * cfg.pilot_power_user * beta);
  }
  est.jammer_eff = mmse_js_jammer(obs, params);
  const Scalar jp = params.jam_power[params.strongest_unused];
  est.err_var_jammer = jp / (Scalar(1) + jp);
  est.params = params;
  return est;
}

/// Baseline estimate set: plain LMMSE per user, no jammer estimate.
template <class Scalar = double>
EstimateSet<Scalar> lmmse_estimates(const PilotObservation<Scalar>& obs,
                                    const PilotBook<Scalar>& book,
                                    const SystemConfig<Scalar>& cfg) {
  EstimateSet<Scalar> est;
  est.users.resize(cfg.antennas, cfg.users);
  est.err_var_users.resize(cfg.users);
  const Scalar tau = Scalar(cfg.pilot_len);
  for (int k = 0; k < cfg.users; ++k) {
    est.users.col(k) = lmmse_estimate(obs, book, k, cfg);
    const Scalar beta = cfg.beta_users[k];
    const Scalar contaminated = Scalar(1) + cfg.pilot_power_jammer * cfg.beta_jammer;
    est.err_var_users[k] =
        beta * contaminated / (contaminated + tau * cfg.pilot_power_user * beta);
  }
  est.err_var_jammer = Scalar(0);
  return est;
}

/// Complex multiplications needed by the two estimators.
inline long long count_lmmse(int antennas, int pilot_len) {
  if (antennas < 1 || pilot_len < 1) throw DomainError("count_lmmse: arguments must be >= 1");
  return static_cast<long long>(antennas) * pilot_len + 7;
}

inline long long count_mmse_js(int antennas, int pilot_len) {
  if (antennas < 1 || pilot_len < 1)
    throw DomainError("count_mmse_js: arguments must be >= 1");
  return static_cast<long long>(antennas) * (3LL * pilot_len + 4) + 16;
}

}  // namespace jamsim
