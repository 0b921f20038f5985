// Seeded simulation of the K-sensor, N-sample observation model.
//
// Determinism contract: every estimate is a pure function of
// (scenario, seed) regardless of thread count. Trials are split over a
// fixed number of counter-based generator streams; per-stream partial
// results are integers or stream-local doubles and are reduced in stream
// order, so parallel and sequential runs produce bit-identical output.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "rocbound/channel_mi.hpp"
#include "rocbound/energy_detector.hpp"
#include "rocbound/special_functions.hpp"

namespace rocbound {

namespace detail {

inline std::uint64_t splitmix_scramble(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based generator stream. Stream k of a given seed starts 2^56
/// counter steps after stream k-1, so up to 256 streams of < 2^56 draws each
/// are disjoint by construction and any stream can be opened without
/// generating its predecessors.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    if (stream >= 256) throw std::invalid_argument("RngStream: stream id must be < 256");
    state_ = detail::splitmix_scramble(seed) + (stream << 56);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0,1), never exactly 0 or 1.
  double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 2.0 * kPi * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly symmetric complex normal with total variance `var`
  /// (variance var/2 per real dimension).
  std::complex<double> complex_normal(double var) {
    const double s = std::sqrt(0.5 * var);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

 private:
  std::uint64_t state_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// --- scenario -------------------------------------------------------------

struct FixedGains {
  std::vector<std::complex<double>> values;  // h_k
};
struct RayleighGains {
  std::vector<double> mean_square;  // E[|h_k|^2], gains redrawn per observation
};
struct FixedSignal {
  std::vector<std::complex<double>> values;  // s(1..N)
};
struct SignalEnergyPmf {
  struct Atom {
    double energy;
    double prob;
  };
  std::vector<Atom> atoms;
};

struct Scenario {
  int sensors = 1;
  int samples = 1;
  double alpha = 0.5;
  std::variant<FixedGains, RayleighGains> gains = FixedGains{{1.0}};
  std::variant<FixedSignal, SignalEnergyPmf> signal = FixedSignal{{1.0}};
  std::vector<double> noise_vars = {1.0};
  std::uint64_t seed = 12345;

  int kn() const { return sensors * samples; }

  double mean_signal_energy() const {
    if (const auto* fs = std::get_if<FixedSignal>(&signal)) {
      double e = 0.0;
      for (const auto& s : fs->values) e += std::norm(s);
      return e;
    }
    const auto& pmf = std::get<SignalEnergyPmf>(signal);
    double e = 0.0;
    for (const auto& a : pmf.atoms) e += a.prob * a.energy;
    return e;
  }

  /// Additive SNR with fixed gains; its mean E[Gamma] under Rayleigh gains.
  double mean_additive_snr() const {
    const double es = mean_signal_energy();
    double snr = 0.0;
    if (const auto* fg = std::get_if<FixedGains>(&gains)) {
      for (std::size_t k = 0; k < fg->values.size(); ++k) {
        snr += std::norm(fg->values[k]) * es / noise_vars[k];
      }
    } else {
      const auto& rg = std::get<RayleighGains>(gains);
      for (std::size_t k = 0; k < rg.mean_square.size(); ++k) {
        snr += rg.mean_square[k] * es / noise_vars[k];
      }
    }
    return snr;
  }

  void validate() const {
    if (sensors < 1 || samples < 1) throw std::invalid_argument("Scenario: sensors and samples must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("Scenario: alpha must lie in [0,1]");
    if (noise_vars.size() != static_cast<std::size_t>(sensors)) {
      throw std::invalid_argument("Scenario: noise_vars length must equal sensors");
    }
    for (double v : noise_vars) {
      if (!(v > 0.0)) throw std::invalid_argument("Scenario: noise variances must be > 0");
    }
    if (const auto* fg = std::get_if<FixedGains>(&gains)) {
      if (fg->values.size() != static_cast<std::size_t>(sensors)) {
        throw std::invalid_argument("Scenario: gains length must equal sensors");
      }
    } else if (std::get<RayleighGains>(gains).mean_square.size() != static_cast<std::size_t>(sensors)) {
      throw std::invalid_argument("Scenario: gain mean squares length must equal sensors");
    }
    if (const auto* fs = std::get_if<FixedSignal>(&signal)) {
      if (fs->values.size() != static_cast<std::size_t>(samples)) {
        throw std::invalid_argument("Scenario: signal length must equal samples");
      }
    } else {
      const auto& pmf = std::get<SignalEnergyPmf>(signal);
      if (pmf.atoms.empty()) throw std::invalid_argument("Scenario: empty signal pmf");
      double p = 0.0;
      for (const auto& a : pmf.atoms) {
        if (!(a.energy > 0.0) || !(a.prob >= 0.0)) {
          throw std::invalid_argument("Scenario: pmf atoms need energy > 0, prob >= 0");
        }
        p += a.prob;
      }
      if (std::abs(p - 1.0) > 1e-10) throw std::invalid_argument("Scenario: signal pmf must sum to 1");
    }
  }
};

/// One observation window, sensors x samples, row-major by sensor.
struct Observation {
  int sensors = 0;
  int samples = 0;
  std::vector<std::complex<double>> y;
  std::complex<double> at(int k, int n) const { return y[static_cast<std::size_t>(k) * samples + n]; }
};

/// Draws Y = xi * h s^H + Z.
///
/// Deterministic draw order per observation: Rayleigh gains (one complex
/// normal per sensor, block fading: redrawn each window), then the signal
/// energy atom when the signal is distribution-valued, then the noise matrix
/// row-major. Distribution-valued signals are realized as sqrt(S) on the
/// first sample; every statistic in this library depends on the signal only
/// through its energy.
inline Observation draw_observation(const Scenario& sc, int xi, RngStream& rng) {
  Observation obs{sc.sensors, sc.samples, {}};
  obs.y.resize(static_cast<std::size_t>(sc.sensors) * sc.samples);

  std::vector<std::complex<double>> h(sc.sensors);
  if (const auto* fg = std::get_if<FixedGains>(&sc.gains)) {
    h = fg->values;
  } else {
    const auto& rg = std::get<RayleighGains>(sc.gains);
    for (int k = 0; k < sc.sensors; ++k) h[k] = rng.complex_normal(rg.mean_square[k]);
  }

  std::vector<std::complex<double>> s(sc.samples, 0.0);
  if (const auto* fs = std::get_if<FixedSignal>(&sc.signal)) {
    s = fs->values;
  } else {
    const auto& pmf = std::get<SignalEnergyPmf>(sc.signal);
    const double u = rng.uniform();
    double acc = 0.0;
    double energy = pmf.atoms.back().energy;
    for (const auto& a : pmf.atoms) {
      acc += a.prob;
      if (u <= acc) {
        energy = a.energy;
        break;
      }
    }
    s[0] = std::sqrt(energy);
  }

  for (int k = 0; k < sc.sensors; ++k) {
    for (int n = 0; n < sc.samples; ++n) {
      std::complex<double> v = rng.complex_normal(sc.noise_vars[k]);
      if (xi) v += h[k] * std::conj(s[n]);
      obs.y[static_cast<std::size_t>(k) * sc.samples + n] = v;
    }
  }
  return obs;
}

/// Energy statistic in the unit-noise domain: sum_k,n |y_k(n)|^2 / sigma_k^2.
inline double whitened_energy(const Scenario& sc, const Observation& obs) {
  double e = 0.0;
  for (int k = 0; k < sc.sensors; ++k) {
    double row = 0.0;
    for (int n = 0; n < sc.samples; ++n) row += std::norm(obs.at(k, n));
    e += row / sc.noise_vars[k];
  }
  return e;
}

// --- estimates ------------------------------------------------------------

/// Wilson score interval for a binomial proportion.
inline std::pair<double, double> wilson_interval(long long successes, long long trials,
                                                 double z = 1.959963984540054) {
  if (trials <= 0) throw std::invalid_argument("wilson_interval: trials must be positive");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct EstimateWithCI {
  double value = 0.0;
  long long trials = 0;
  double ci_low = 0.0;  // 95% Wilson interval
  double ci_high = 1.0;

  bool covers(double p) const { return ci_low <= p && p <= ci_high; }
};

inline EstimateWithCI make_estimate(long long successes, long long trials, double z = 1.959963984540054) {
  const auto [lo, hi] = wilson_interval(successes, trials, z);
  return {static_cast<double>(successes) / static_cast<double>(trials), trials, lo, hi};
}

namespace detail {

inline constexpr int kNumStreams = 64;

// Stream-id namespaces per estimator so concurrent use of one seed across
// estimators never reuses a stream.
inline constexpr std::uint64_t kStreamBaseDetector = 0;    // +64 for the busy hypothesis
inline constexpr std::uint64_t kStreamBaseVectorMi = 128;
inline constexpr std::uint64_t kStreamBaseGamma = 192;

inline long long stream_share(long long trials, int stream) {
  const long long q = trials / kNumStreams;
  return q + (stream < trials % kNumStreams ? 1 : 0);
}

template <typename Fn>
void run_streams(int threads, Fn&& per_stream) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, kNumStreams);
  if (threads == 1) {
    for (int s = 0; s < kNumStreams; ++s) per_stream(s);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([t, threads, &per_stream] {
      for (int s = t; s < kNumStreams; s += threads) per_stream(s);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

struct DetectorRocEstimate {
  double theta = 0.0;
  EstimateWithCI pfa;
  EstimateWithCI pmd;
};

/// Empirical detector error probabilities on a theta grid, all thresholds
/// evaluated on the same draws per hypothesis. The decision rule matches the
/// analytic detector with the undecided band resolved as "signal present":
/// declare 1 iff energy > theta + ln(min(alpha, 1-alpha)).
inline std::vector<DetectorRocEstimate> estimate_detector_roc(const Scenario& sc,
                                                              std::span<const double> theta_grid,
                                                              long long trials, int threads = 0) {
  sc.validate();
  if (trials < 1000) throw std::invalid_argument("estimate_detector_roc: need at least 1000 trials");
  const std::size_t nt = theta_grid.size();
  const double shift = std::log(std::min(sc.alpha, 1.0 - sc.alpha));

  // counts[xi][stream][theta]
  std::vector<std::vector<long long>> counts[2];
  for (int xi = 0; xi < 2; ++xi) {
    counts[xi].assign(detail::kNumStreams, std::vector<long long>(nt, 0));
  }
  detail::run_streams(threads, [&](int s) {
    for (int xi = 0; xi < 2; ++xi) {
      RngStream rng(sc.seed, detail::kStreamBaseDetector + static_cast<std::uint64_t>(xi) * 64 + s);
      const long long share = detail::stream_share(trials, s);
      auto& row = counts[xi][s];
      for (long long t = 0; t < share; ++t) {
        const Observation obs = draw_observation(sc, xi, rng);
        const double e = whitened_energy(sc, obs);
        for (std::size_t i = 0; i < nt; ++i) {
          if (e > theta_grid[i] + shift) ++row[i];  // declared busy
        }
      }
    }
  });

  std::vector<DetectorRocEstimate> out(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    long long busy0 = 0, busy1 = 0;
    for (int s = 0; s < detail::kNumStreams; ++s) {
      busy0 += counts[0][s][i];
      busy1 += counts[1][s][i];
    }
    out[i].theta = theta_grid[i];
    out[i].pfa = make_estimate(busy0, trials);           // declared busy | idle
    out[i].pmd = make_estimate(trials - busy1, trials);  // declared idle | busy
  }
  return out;
}

struct MiEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long trials = 0;
};

/// Monte-Carlo mutual information of the real vector channel y = X a + z,
/// X = -1 with probability alpha, else +1, z standard normal. Averages
/// -log2( alpha e^{-||y+a||^2/2} + (1-alpha) e^{-||y-a||^2/2} ) - (n/2) log2(e),
/// whose expectation is I(X; y).
inline MiEstimate estimate_vector_mi(double alpha, std::span<const double> a, long long trials,
                                     std::uint64_t seed, int threads = 0) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::domain_error("estimate_vector_mi: bad alpha");
  if (trials < 10000) throw std::invalid_argument("estimate_vector_mi: need at least 10000 trials");
  if (a.empty()) throw std::invalid_argument("estimate_vector_mi: empty direction vector");
  if (alpha == 0.0 || alpha == 1.0) return {0.0, 0.0, trials};

  const int n = static_cast<int>(a.size());
  const double la = std::log(alpha), lb = std::log(1.0 - alpha);
  std::vector<double> sum(detail::kNumStreams, 0.0), sumsq(detail::kNumStreams, 0.0);

  detail::run_streams(threads, [&](int s) {
    RngStream rng(seed, detail::kStreamBaseVectorMi + s);
    const long long share = detail::stream_share(trials, s);
    std::vector<double> y(n);
    double acc = 0.0, acc2 = 0.0;
    for (long long t = 0; t < share; ++t) {
      const double x = rng.uniform() < alpha ? -1.0 : 1.0;
      for (int i = 0; i < n; ++i) y[i] = x * a[i] + rng.normal();
      double up = 0.0, um = 0.0;
      for (int i = 0; i < n; ++i) {
        const double dp = y[i] + a[i];
        const double dm = y[i] - a[i];
        up += dp * dp;
        um += dm * dm;
      }
      const double e0 = la - 0.5 * up;
      const double e1 = lb - 0.5 * um;
      const double m = std::max(e0, e1);
      const double f =
          -(m + std::log(std::exp(e0 - m) + std::exp(e1 - m))) / kLn2 - 0.5 * n * kLog2E;
      acc += f;
      acc2 += f * f;
    }
    sum[s] = acc;
    sumsq[s] = acc2;
  });

  double total = 0.0, total2 = 0.0;
  for (int s = 0; s < detail::kNumStreams; ++s) {  // fixed reduction order
    total += sum[s];
    total2 += sumsq[s];
  }
  const double mean = total / static_cast<double>(trials);
  const double var = std::max(0.0, total2 / static_cast<double>(trials) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(trials)), trials};
}

/// Draws of the random additive SNR Gamma = sum_k |h_k|^2 ||s||^2 / sigma_k^2
/// under Rayleigh gains. Output order is fixed (stream-major).
inline std::vector<double> sample_gamma(const Scenario& sc, long long draws, int threads = 0) {
  sc.validate();
  if (!std::holds_alternative<RayleighGains>(sc.gains)) {
    throw std::invalid_argument("sample_gamma: scenario must use Rayleigh gains");
  }
  if (draws < 1) throw std::invalid_argument("sample_gamma: draws must be positive");
  const auto& rg = std::get<RayleighGains>(sc.gains);

  std::vector<long long> offsets(detail::kNumStreams + 1, 0);
  for (int s = 0; s < detail::kNumStreams; ++s) {
    offsets[s + 1] = offsets[s] + detail::stream_share(draws, s);
  }
  std::vector<double> out(static_cast<std::size_t>(draws));
  detail::run_streams(threads, [&](int s) {
    RngStream rng(sc.seed, detail::kStreamBaseGamma + s);
    for (long long t = offsets[s]; t < offsets[s + 1]; ++t) {
      double gsum = 0.0;
      for (int k = 0; k < sc.sensors; ++k) {
        gsum += std::norm(rng.complex_normal(rg.mean_square[k])) / sc.noise_vars[k];
      }
      double energy;
      if (const auto* fs = std::get_if<FixedSignal>(&sc.signal)) {
        energy = 0.0;
        for (const auto& v : fs->values) energy += std::norm(v);
      } else {
        const auto& pmf = std::get<SignalEnergyPmf>(sc.signal);
        const double u = rng.uniform();
        double acc = 0.0;
        energy = pmf.atoms.back().energy;
        for (const auto& a : pmf.atoms) {
          acc += a.prob;
          if (u <= acc) {
            energy = a.energy;
            break;
          }
        }
      }
      out[static_cast<std::size_t>(t)] = gsum * energy;
    }
  });
  return out;
}

}  // namespace rocbound
