#pragma once

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "jamsim/detection.hpp"
#include "jamsim/estimation.hpp"
#include "jamsim/jammer.hpp"
#include "jamsim/pilot_phase.hpp"

namespace jamsim {

enum class EstimatorKind { lmmse, mmse_js };
enum class SeRoute { monte_carlo, closed_form, asymptotic };

/// Sentinel for the SE branch that grows without bound in the antenna count
/// (no jamming energy on the pilots); kept finite so sums stay well defined.
template <class Scalar>
inline constexpr Scalar kUnboundedSe = std::numeric_limits<Scalar>::max();

/// Spectral efficiency of one operating point, bits/s/Hz.
template <class Scalar = double>
struct SeResult {
  RealVector<Scalar> per_user;
  Scalar sum{};
  RealVector<Scalar> ci_halfwidth;  // 95% Monte Carlo half-width per user
  long n_outer = 0;
  long n_inner = 0;
  SeRoute method = SeRoute::monte_carlo;
  bool unbounded = false;      // asymptotic route, no-jamming branch
  long excluded_draws = 0;     // outer draws without a usable inner sample
  bool validity_warning = false;

  Scalar summed_ci() const { return ci_halfwidth.sum(); }
};

namespace detail {

constexpr double kNormal975 = 1.959964;

/// Mean/CI reduction of per-draw log terms; the reduction is serial and in
/// draw order, so parallel and serial runs produce identical bytes.
template <class Scalar>
void reduce_log_terms(const RealMatrix<Scalar>& log_terms,
                      const std::vector<char>& excluded, Scalar prelog,
                      SeResult<Scalar>& result) {
  const Index users = log_terms.cols();
  result.per_user = RealVector<Scalar>::Zero(users);
  result.ci_halfwidth = RealVector<Scalar>::Zero(users);
  long valid = 0;
  for (Index j = 0; j < log_terms.rows(); ++j) {
    if (excluded[static_cast<size_t>(j)]) continue;
    ++valid;
    result.per_user += log_terms.row(j).transpose();
  }
  if (valid == 0) throw Error("spectral efficiency: no valid outer draws");
  result.per_user /= Scalar(valid);
  if (valid > 1) {
    for (Index j = 0; j < log_terms.rows(); ++j) {
      if (excluded[static_cast<size_t>(j)]) continue;
      result.ci_halfwidth +=
          (log_terms.row(j).transpose() - result.per_user).array().square().matrix();
    }
    result.ci_halfwidth =
        (result.ci_halfwidth / Scalar(valid - 1)).array().sqrt().matrix() *
        Scalar(kNormal975) / std::sqrt(Scalar(valid));
  }
  result.per_user *= prelog;
  result.ci_halfwidth *= prelog;
  result.sum = result.per_user.sum();
}

}  // namespace detail

/// Effective SINR of user `user` in the closed form valid whenever every
/// user and the jammer can be paired with distinct unused pilots
/// (pilot_len >= 2*users + 1): the zero-forcing array gain (M - K - 1)
/// against the mutually independent estimation-error, jamming-residual and
/// noise powers.
template <class Scalar = double>
Scalar sinr_closed_form(const SystemConfig<Scalar>& cfg, const RealVector<Scalar>& ratio,
                        Scalar jam_power_sel, int user) {
  if (cfg.antennas < cfg.users + 1)
    throw DomainError("sinr_closed_form: antennas must be at least users + 1");
  const Scalar tau = Scalar(cfg.pilot_len);
  const Scalar tau_pt = tau * cfg.pilot_power_user;
  const Scalar d2 = ratio[user] * ratio[user];
  const Scalar beta = cfg.beta_users[user];
  const Scalar num = tau_pt * cfg.data_power_user * beta * beta /
                     (Scalar(1) + d2 + tau_pt * beta) *
                     Scalar(cfg.antennas - cfg.users - 1);
  Scalar den = Scalar(1) + cfg.data_power_jammer / (Scalar(1) + jam_power_sel);
  for (int i = 0; i < cfg.users; ++i) {
    const Scalar di2 = ratio[i] * ratio[i];
    den += cfg.data_power_user * (Scalar(1) + di2) * cfg.beta_users[i] /
           (Scalar(1) + di2 + tau_pt * cfg.beta_users[i]);
  }
  return num / den;
}

template <class Scalar = double>
bool corollary_applicable(const SystemConfig<Scalar>& cfg) {
  return cfg.pilot_len >= 2 * cfg.users + 1;
}

/// Closed-form SE averaged over an ensemble of jammer draws, with the true
/// leakage ratios and selected jamming power of each draw plugged into the
/// closed-form SINR.
template <class Scalar = double>
SeResult<Scalar> se_closed_form(const SystemConfig<Scalar>& cfg,
                                const std::vector<JammerRealization<Scalar>>& draws) {
  if (draws.empty()) throw ConfigError("se_closed_form: need at least one draw");
  RealMatrix<Scalar> log_terms(static_cast<Index>(draws.size()), cfg.users);
  for (size_t j = 0; j < draws.size(); ++j) {
    const auto params = genie_jamming_params(draws[j]);
    const Scalar jam_sel = params.jam_power[params.strongest_unused];
    for (int k = 0; k < cfg.users; ++k) {
      const Scalar rho = sinr_closed_form(cfg, params.ratio, jam_sel, k);
      log_terms(static_cast<Index>(j), k) = std::log2(Scalar(1) + rho);
    }
  }
  SeResult<Scalar> result;
  result.method = SeRoute::closed_form;
  result.n_outer = static_cast<long>(draws.size());
  result.validity_warning = !corollary_applicable(cfg);
  const std::vector<char> excluded(draws.size(), 0);
  const Scalar prelog = Scalar(1) - Scalar(cfg.pilot_len) / Scalar(cfg.block_len);
  detail::reduce_log_terms(log_terms, excluded, prelog, result);
  return result;
}

/// Large-array SE limit: the desired and jamming powers both scale with the
/// square of the array size, so only their ratio survives.
template <class Scalar = double>
SeResult<Scalar> asymptotic_se(const SystemConfig<Scalar>& cfg,
                               const std::vector<JammerRealization<Scalar>>& draws) {
  if (draws.empty()) throw ConfigError("asymptotic_se: need at least one draw");
  SeResult<Scalar> result;
  result.method = SeRoute::asymptotic;
  result.n_outer = static_cast<long>(draws.size());

  auto unbounded = [&] {
    result.unbounded = true;
    result.per_user = RealVector<Scalar>::Constant(cfg.users, kUnboundedSe<Scalar>);
    result.ci_halfwidth = RealVector<Scalar>::Zero(cfg.users);
    result.sum = kUnboundedSe<Scalar>;
    return result;
  };
  if (cfg.pilot_power_jammer <= Scalar(0) || cfg.data_power_jammer <= Scalar(0))
    return unbounded();

  RealMatrix<Scalar> log_terms(static_cast<Index>(draws.size()), cfg.users);
  const Scalar jam_gain = cfg.pilot_power_jammer * cfg.data_power_jammer *
                          cfg.beta_jammer * cfg.beta_jammer;
  for (size_t j = 0; j < draws.size(); ++j) {
    for (int k = 0; k < cfg.users; ++k) {
      const Scalar overlap_sq =
          std::norm(draws[j].overlaps[draws[j].assignment[static_cast<size_t>(k)]]);
      if (overlap_sq == Scalar(0)) return unbounded();
      const Scalar beta = cfg.beta_users[k];
      const Scalar rho = cfg.pilot_power_user * cfg.data_power_user * beta * beta /
                         (jam_gain * overlap_sq);
      log_terms(static_cast<Index>(j), k) = std::log2(Scalar(1) + rho);
    }
  }
  const std::vector<char> excluded(draws.size(), 0);
  const Scalar prelog = Scalar(1) - Scalar(cfg.pilot_len) / Scalar(cfg.block_len);
  detail::reduce_log_terms(log_terms, excluded, prelog, result);
  return result;
}

/// Per-user effective SINR of one jammer draw, sample-estimated from
/// `n_inner` independent channel/noise realizations.
template <class Scalar = double>
struct SinrSample {
  RealVector<Scalar> sinr;
  long valid_inner = 0;
  long skipped_inner = 0;  // degenerate inner trials (singular combiner)
};

/// One outer draw of the nested Monte Carlo evaluator.
///
/// For the zero-forcing jamming suppressor the SINR uses the conditional
/// variance of the combined estimation-error leakage (errors measured
/// against the true channels, the jammer error against the true effective
/// channel on the selected pilot) plus the combiner's noise gain. For the
/// mf/zf baselines all conditional moments of the general SINR expression
/// are sample-estimated instead.
template <class Scalar = double>
SinrSample<Scalar> mc_effective_sinr(const SystemConfig<Scalar>& cfg,
                                     const PilotBook<Scalar>& book,
                                     const JammerRealization<Scalar>& jam,
                                     EstimatorKind estimator, CombinerKind detector,
                                     ParamMode mode, long n_inner,
                                     std::uint64_t block) {
  const int users = cfg.users;
  const bool zf_js = detector == CombinerKind::zfjs;
  const auto genie = genie_jamming_params(jam);

  // Accumulators. zfjs: Welford over the combined error leakage Z_k plus the
  // mean noise gain. mf/zf: sample moments of v_k^H h_i, v_k^H h_w, |v_k|^2.
  ComplexVector<Scalar> z_mean = ComplexVector<Scalar>::Zero(users);
  RealVector<Scalar> z_m2 = RealVector<Scalar>::Zero(users);
  RealVector<Scalar> gain_sum = RealVector<Scalar>::Zero(users);
  RealMatrix<Scalar> mom_users = RealMatrix<Scalar>::Zero(users, users);
  ComplexVector<Scalar> mom_desired = ComplexVector<Scalar>::Zero(users);
  RealVector<Scalar> mom_jammer = RealVector<Scalar>::Zero(users);

  SinrSample<Scalar> sample;
  const Scalar q_d = cfg.data_power_jammer;
  const Scalar amp_jam = std::sqrt(Scalar(cfg.pilot_len) * cfg.pilot_power_jammer);

  for (long inner = 0; inner < n_inner; ++inner) {
    auto rng_ch = RngStream::derive(cfg.seed, block, StreamTag::channels,
                                    static_cast<std::uint64_t>(inner));
    const auto channels = draw_channels(cfg, rng_ch);
    auto rng_noise = RngStream::derive(cfg.seed, block, StreamTag::pilot_noise,
                                       static_cast<std::uint64_t>(inner));
    const auto obs = receive_pilots(channels, jam, book, cfg, rng_noise);

    JammingParams<Scalar> params;
    EstimateSet<Scalar> est;
    Combiner<Scalar> comb;
    try {
      const bool need_params = zf_js || estimator == EstimatorKind::mmse_js;
      if (need_params)
        params = mode == ParamMode::genie ? genie : estimate_jamming_params(obs, book, cfg);
      if (zf_js && params.jam_power[params.strongest_unused] <= Scalar(0))
        throw SingularCombinerError("zero jammer estimate", 0.0);
      if (estimator == EstimatorKind::mmse_js) {
        est = mmse_js_estimates(obs, book, params, cfg);
      } else {
        est = lmmse_estimates(obs, book, cfg);
        if (zf_js) {
          est.jammer_eff = mmse_js_jammer(obs, params);
          est.params = params;
        }
      }
      comb = build_combiner(est, detector);
    } catch (const SingularCombinerError&) {
      ++sample.skipped_inner;
      continue;
    }
    ++sample.valid_inner;
    const long n = sample.valid_inner;

    const auto user_weights = comb.weights.leftCols(users);
    for (int k = 0; k < users; ++k) gain_sum[k] += user_weights.col(k).squaredNorm();

    if (zf_js) {
      const int sel = params.strongest_unused;
      const Complex<Scalar> overlap_sel = jam.overlaps[sel];
      const ComplexVector<Scalar> err_sum =
          (est.users - channels.users).rowwise().sum();
      const ComplexVector<Scalar> err_jam =
          est.jammer_eff - amp_jam * overlap_sel * channels.jammer;

      const Scalar jam_weight_power = mode == ParamMode::genie
                                          ? jam.jam_power[sel]
                                          : params.jam_power[sel];
      const Scalar w = q_d > Scalar(0) ? std::sqrt(q_d / jam_weight_power) : Scalar(0);
      const ComplexVector<Scalar> leak =
          std::sqrt(cfg.data_power_user) * (user_weights.adjoint() * err_sum) +
          w * (user_weights.adjoint() * err_jam);
      for (int k = 0; k < users; ++k) {
        const Complex<Scalar> delta = leak[k] - z_mean[k];
        z_mean[k] += delta / Scalar(n);
        z_m2[k] += (std::conj(delta) * (leak[k] - z_mean[k])).real();
      }
    } else {
      const ComplexMatrix<Scalar> cross = user_weights.adjoint() * channels.users;
      mom_desired += cross.diagonal();
      mom_users += cross.cwiseAbs2();
      mom_jammer += (user_weights.adjoint() * channels.jammer).cwiseAbs2();
    }
  }

  if (sample.valid_inner < 2) return sample;  // caller treats as failed draw

  const Scalar n = Scalar(sample.valid_inner);
  sample.sinr.resize(users);
  for (int k = 0; k < users; ++k) {
    Scalar rho;
    if (zf_js) {
      const Scalar var = z_m2[k] / (n - Scalar(1));
      rho = cfg.data_power_user / (var + gain_sum[k] / n);
    } else {
      const Scalar desired = std::norm(mom_desired[k] / n);
      Scalar den = cfg.data_power_user * (mom_users.row(k).sum() / n - desired) +
                   q_d * mom_jammer[k] / n + gain_sum[k] / n;
      rho = den > Scalar(0) ? cfg.data_power_user * desired / den : Scalar(0);
    }
    sample.sinr[k] = rho;
  }
  return sample;
}

struct MonteCarloOptions {
  long n_outer = 2000;
  long n_inner = 200;
  ParamMode mode = ParamMode::estimated;
  int threads = 0;  // 0: hardware concurrency
  double max_excluded_fraction = 0.001;
};

/// Nested Monte Carlo SE: outer draws fix the jammer sequence (and pilot
/// assignment under hopping), inner draws average over channels and noise.
/// Outer draws are independent work units; per-draw results land in a
/// preallocated table and are reduced serially, so the result is identical
/// for any thread count.
template <class Scalar = double>
SeResult<Scalar> se_monte_carlo(const SystemConfig<Scalar>& cfg, EstimatorKind estimator,
                                CombinerKind detector,
                                const MonteCarloOptions& opts = {}) {
  cfg.validate();
  if (opts.n_outer < 2 || opts.n_inner < 2)
    throw ConfigError("se_monte_carlo: n_outer and n_inner must be >= 2");

  const long n_outer = opts.n_outer;
  RealMatrix<Scalar> log_terms = RealMatrix<Scalar>::Zero(n_outer, cfg.users);
  std::vector<char> excluded(static_cast<size_t>(n_outer), 0);
  std::atomic<long> next_draw{0};
  std::atomic<long> inner_skips{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    try {
      for (;;) {
        const long j = next_draw.fetch_add(1, std::memory_order_relaxed);
        if (j >= n_outer) return;
        const auto block = static_cast<std::uint64_t>(j);
        auto rng_book = RngStream::derive(cfg.seed, block, StreamTag::pilot_assignment);
        const auto book =
            build_pilot_book<Scalar>(cfg.pilot_len, cfg.pilot_hopping, rng_book);
        auto rng_jam = RngStream::derive(cfg.seed, block, StreamTag::jammer_sequence);
        const auto jam = draw_jammer_sequence(cfg, book, rng_jam);

        const auto sample = mc_effective_sinr(cfg, book, jam, estimator, detector,
                                              opts.mode, opts.n_inner, block);
        inner_skips.fetch_add(sample.skipped_inner, std::memory_order_relaxed);
        if (sample.valid_inner < 2) {
          excluded[static_cast<size_t>(j)] = 1;
          continue;
        }
        for (int k = 0; k < cfg.users; ++k)
          log_terms(j, k) = std::log2(Scalar(1) + sample.sinr[k]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  int n_threads = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  SeResult<Scalar> result;
  result.method = SeRoute::monte_carlo;
  result.n_outer = opts.n_outer;
  result.n_inner = opts.n_inner;
  result.excluded_draws =
      std::count(excluded.begin(), excluded.end(), static_cast<char>(1));
  if (result.excluded_draws >
      static_cast<long>(opts.max_excluded_fraction * static_cast<double>(n_outer))) {
    throw Error("se_monte_carlo: " + std::to_string(result.excluded_draws) +
                " of " + std::to_string(n_outer) + " outer draws degenerate");
  }
  const Scalar prelog = Scalar(1) - Scalar(cfg.pilot_len) / Scalar(cfg.block_len);
  detail::reduce_log_terms(log_terms, excluded, prelog, result);
  return result;
}

/// Conditional moments of the matched filter built on the baseline LMMSE
/// estimate, given the realized jamming overlap on the user's pilot, plus
/// the resulting effective SINR.
template <class Scalar = double>
struct MfClosedFormMoments {
  Scalar scale{};                           // B, squared LMMSE gain
  Scalar mean_desired{};                    // E{v_k^H h_k | alpha}
  RealVector<Scalar> second_moment_users;   // E{|v_k^H h_i|^2 | alpha} per i
  Scalar second_moment_jammer{};            // E{|v_k^H h_w|^2 | alpha}
  Scalar noise_gain{};                      // E{|v_k|^2 | alpha}
  Scalar sinr{};
};

template <class Scalar = double>
MfClosedFormMoments<Scalar> mf_conditional_moments(const SystemConfig<Scalar>& cfg,
                                                   int user, Scalar overlap_sq) {
  if (!(overlap_sq >= Scalar(0)) || !std::isfinite(static_cast<double>(overlap_sq)))
    throw DomainError("mf_conditional_moments: overlap_sq must be finite, >= 0");
  const Scalar tau = Scalar(cfg.pilot_len);
  const Scalar m = Scalar(cfg.antennas);
  const Scalar beta = cfg.beta_users[user];
  const Scalar tau_pt = tau * cfg.pilot_power_user;
  const Scalar beta_w = cfg.beta_jammer;

  // Prior-average denominator (the receiver's scale uses E|alpha|^2 = 1/tau)
  // versus the realized one.
  const Scalar prior = Scalar(1) + cfg.pilot_power_jammer * beta_w + tau_pt * beta;
  const Scalar realized =
      Scalar(1) + tau * cfg.pilot_power_jammer * overlap_sq * beta_w + tau_pt * beta;

  MfClosedFormMoments<Scalar> out;
  out.scale = tau_pt * beta * beta / (prior * prior);
  const Scalar bm = out.scale * m;
  out.mean_desired = bm * prior;
  out.second_moment_users.resize(cfg.users);
  for (int i = 0; i < cfg.users; ++i) {
    out.second_moment_users[i] =
        i == user ? bm * (tau_pt * m * beta * beta + beta * realized)
                  : bm * cfg.beta_users[i] * realized;
  }
  out.second_moment_jammer =
      bm * (tau * cfg.pilot_power_jammer * overlap_sq * m * beta_w * beta_w +
            beta_w * realized);
  out.noise_gain = bm * realized;

  const Scalar p_d = cfg.data_power_user;
  const Scalar desired = p_d * out.mean_desired * out.mean_desired;
  const Scalar den = p_d * out.second_moment_users.sum() - desired +
                     cfg.data_power_jammer * out.second_moment_jammer + out.noise_gain;
  out.sinr = desired / den;
  return out;
}

struct ComplexityCounts {
  long long lmmse = 0;
  long long mmse_js = 0;
  long long zfjs = 0;
};

/// Complex-multiplication counts of the two estimators and the
/// jamming-suppressing zero-forcer.
inline ComplexityCounts complexity_counts(int antennas, int users, int pilot_len) {
  if (antennas < 1 || users < 1 || pilot_len < 1)
    throw DomainError("complexity_counts: arguments must be >= 1");
  return {count_lmmse(antennas, pilot_len), count_mmse_js(antennas, pilot_len),
          count_zfjs(antennas, users)};
}

}  // namespace jamsim
