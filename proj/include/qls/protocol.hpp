#pragma once

// Monte Carlo of the seven-step logic-spectroscopy cycle.
//
//   (i)   decouple, sideband-cool both axial modes (residual occupation)
//   (ii)  drive the spectroscopy cyclotron (or anomaly) transition
//   (iii) red-sideband pi-pulse on S: |n_z, n_c> = |0, 1> -> |1, 0>
//   (iv)  couple through the wire for t_ex: axial quantum S -> L
//   (v)   red-sideband pi-pulse on L: |1, 0> -> |0, 1>
//   (vi)  measure the logic axial frequency, threshold on the bottle shift
//   (vii) bookkeeping, back to (i)
//
// Stage failures are silent; only step (vi) produces a measurement. Every
// cycle consumes the same number of random draws regardless of branch, so
// runs with different fidelities but equal seeds share random numbers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qls/circuit.hpp"
#include "qls/constants.hpp"
#include "qls/error.hpp"
#include "qls/spectroscopy.hpp"

namespace qls {

enum class LineProfile { exponential, gaussian };

inline std::string to_string(LineProfile p) {
  return p == LineProfile::exponential ? "exponential" : "gaussian";
}

/// Spectroscopy drive. The excitation profile is the drive's own Gaussian
/// spectrum (width `drive_width`) combined with the thermal cyclotron
/// profile of width `thermal_width`: a one-sided exponential (default) or a
/// Gaussian. The result is scaled so that its maximum is `peak_probability`.
struct DriveModel {
  std::vector<double> detuning_grid;  // drive minus cyclotron frequency [rad/s]
  LineProfile profile = LineProfile::exponential;
  double peak_probability = 1.0;
  double drive_width = 0.0;  // [rad/s]

  bool operator==(const DriveModel&) const = default;
};

namespace detail {

// exp(x^2) erfc(x).
inline double erfcx(double x) {
  if (x < 26.0) return std::exp(x * x) * std::erfc(x);
  const double inv2 = 1.0 / (x * x);
  return (1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2) / (x * std::sqrt(std::numbers::pi));
}

}  // namespace detail

class ExcitationProfile {
 public:
  ExcitationProfile(LineProfile profile, double peak, double drive_width, double thermal_width)
      : profile_(profile), peak_(peak), w_(drive_width), lambda_(thermal_width) {
    if (!(peak >= 0.0 && peak <= 1.0))
      throw DomainError("ExcitationProfile: peak probability must lie in [0, 1]");
    if (!(w_ >= 0.0) || !(lambda_ >= 0.0))
      throw DomainError("ExcitationProfile: widths must be non-negative");
    if (profile_ == LineProfile::exponential && w_ > 0.0 && lambda_ > 0.0) normalize_emg();
  }

  /// Standard deviation of the profile [rad/s].
  double width() const { return std::hypot(w_, lambda_); }

  double operator()(double detuning) const {
    if (profile_ == LineProfile::gaussian || lambda_ == 0.0) {
      const double sigma = width();
      if (sigma == 0.0) return detuning == 0.0 ? peak_ : 0.0;
      return peak_ * std::exp(-0.5 * detuning * detuning / (sigma * sigma));
    }
    if (w_ == 0.0) return detuning >= 0.0 ? peak_ * std::exp(-detuning / lambda_) : 0.0;
    return peak_ * emg_shape(detuning) / emg_max_;
  }

 private:
  // Exponentially modified Gaussian, up to a constant:
  // exp(-x^2/2w^2) erfcx((w/lambda - x/w)/sqrt 2).
  double emg_shape(double x) const {
    const double arg = (w_ / lambda_ - x / w_) / std::numbers::sqrt2;
    if (arg < 0.0)
      return std::exp(0.5 * w_ * w_ / (lambda_ * lambda_) - x / lambda_) * std::erfc(arg);
    return std::exp(-0.5 * x * x / (w_ * w_)) * detail::erfcx(arg);
  }

  // Golden-section search for the (unique) mode.
  void normalize_emg() {
    double lo = -3.0 * w_, hi = lambda_ + 3.0 * w_;
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = emg_shape(x1), f2 = emg_shape(x2);
    for (int i = 0; i < 200 && hi - lo > 1e-13 * (w_ + lambda_); ++i) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + r * (hi - lo);
        f2 = emg_shape(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - r * (hi - lo);
        f1 = emg_shape(x1);
      }
    }
    emg_max_ = std::max(f1, f2);
  }

  LineProfile profile_;
  double peak_;
  double w_;
  double lambda_;
  double emg_max_ = 1.0;
};

/// Axial-frequency readout. The estimator has white frequency noise:
/// sigma(tau) = noise_density / sqrt(tau).
struct DetectionModel {
  double averaging_time = 0.05;              // [s]
  double noise_density = two_pi * 0.1;       // [rad/s * sqrt(s)]
  double threshold = 0.0;                    // decision level on the shift [rad/s]
  double separation_sigmas = 3.0;            // threshold-to-level distance for timing
  double overhead = 0.0;                     // fixed per-measurement dead time [s]

  double sigma() const { return noise_density / std::sqrt(averaging_time); }

  bool operator==(const DetectionModel&) const = default;
};

/// Averaging time needed to resolve a shift `delta` with the threshold at
/// delta/2 sitting `separation_sigmas` standard deviations from both levels,
/// never shorter than one beat period 2 pi / delta.
inline double required_averaging_time(const DetectionModel& d, double delta) {
  if (delta == 0.0) return std::numeric_limits<double>::infinity();
  const double snr_limited = std::pow(2.0 * d.separation_sigmas * d.noise_density / delta, 2);
  const double resolution_limited = two_pi / std::abs(delta);
  return std::max(snr_limited, resolution_limited);
}

inline double detection_time(const DetectionModel& d, double delta) {
  return required_averaging_time(d, delta) + d.overhead;
}

/// Ratio of detection times for shifts `delta_ref` and `delta_new`.
inline double detection_speedup(const DetectionModel& d, double delta_ref, double delta_new) {
  return detection_time(d, delta_ref) / detection_time(d, delta_new);
}

struct StageTimes {
  double cooling = 0.1;    // [s]
  double drive = 0.0;      // [s]
  double pi_pulse = 0.0;   // each of steps (iii) and (v) [s]

  bool operator==(const StageTimes&) const = default;
};

struct ProtocolConfig {
  ExchangeBudget budget;
  ShiftSet shifts_L;
  ShiftSet shifts_S;
  double omega_c_S = 0.0;  // spectroscopy cyclotron frequency [rad/s]
  double g = constants::g_e;
  double swap_fidelity = 1.0;
  double pi_pulse_fidelity = 1.0;
  double sideband_cooling_residual = 0.0;  // residual n_bar after step (i)
  DetectionModel detection;
  DriveModel drive;
  double field_noise = 0.0;  // Delta B / B per sqrt(minute)
  StageTimes times;
  std::size_t cycles = 1000;
  std::uint64_t seed = 1;
  bool anomaly = false;

  double thermal_width() const { return shifts_S.broadening; }

  ExcitationProfile excitation() const {
    return {drive.profile, drive.peak_probability, drive.drive_width, thermal_width()};
  }

  double cycle_time() const {
    return times.cooling + times.drive + 2.0 * times.pi_pulse + budget.t_ex +
           detection.averaging_time + detection.overhead;
  }

  void validate() const {
    auto probability = [](double p, const char* what) {
      if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(std::string("ProtocolConfig: ") + what + " must lie in [0, 1]");
    };
    probability(swap_fidelity, "swap_fidelity");
    probability(pi_pulse_fidelity, "pi_pulse_fidelity");
    probability(drive.peak_probability, "drive peak probability");
    if (!(sideband_cooling_residual >= 0.0))
      throw DomainError("ProtocolConfig: cooling residual must be non-negative");
    if (cycles < 1) throw DomainError("ProtocolConfig: cycles must be >= 1");
    if (!(detection.averaging_time > 0.0))
      throw DomainError("ProtocolConfig: averaging time must be positive");
    if (!(detection.noise_density >= 0.0))
      throw DomainError("ProtocolConfig: noise density must be non-negative");
    if (!(detection.threshold > 0.0) || !(detection.threshold < std::abs(shifts_L.delta)))
      throw DomainError("ProtocolConfig: threshold must lie between 0 and the logic bottle shift");
    if (!(field_noise >= 0.0)) throw DomainError("ProtocolConfig: field noise must be >= 0");
    if (!(drive.drive_width >= 0.0)) throw DomainError("ProtocolConfig: drive width must be >= 0");
    if (times.cooling < 0.0 || times.drive < 0.0 || times.pi_pulse < 0.0)
      throw DomainError("ProtocolConfig: stage times must be non-negative");
  }
};

struct ProtocolRecord {
  std::size_t point = 0;
  std::size_t cycle = 0;
  double detuning = 0.0;            // nominal drive detuning [rad/s]
  double effective_detuning = 0.0;  // after field drift [rad/s]
  int n_c_S = 0;                    // spectroscopy cyclotron number after the drive
  bool transfer_iii = false;
  bool exchange_iv = false;
  bool transfer_v = false;
  double measured_shift = 0.0;  // logic axial shift estimate [rad/s]
  bool declared_jump = false;
  double elapsed = 0.0;                   // cycle duration [s]
  double spectroscopy_axial_shift = 0.0;  // own bottle shift of S after the drive [rad/s]

  bool operator==(const ProtocolRecord&) const = default;
};

/// Deterministic per-point random stream.
inline std::mt19937_64 point_stream(std::uint64_t seed, std::uint64_t point) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(point), static_cast<std::uint32_t>(point >> 32),
                    0x51u};
  return std::mt19937_64(seq);
}

/// Probability that a cooled mode is in its ground state.
inline double ground_probability(double residual_n_bar) { return 1.0 / (1.0 + residual_n_bar); }

inline double spectroscopy_axial_shift(const ProtocolConfig& c, bool excited) {
  if (!excited) return 0.0;
  const QuantumNumbers before{0, Spin::up, 0};
  const QuantumNumbers after{1, c.anomaly ? Spin::down : Spin::up, 0};
  return axial_frequency(after, 0.0, c.shifts_S.delta, c.g) -
         axial_frequency(before, 0.0, c.shifts_S.delta, c.g);
}

/// One pass through steps (i)-(vii). `field_offset` is the current fractional
/// field deviation Delta B / B, which moves the cyclotron line.
template <typename Rng>
ProtocolRecord run_cycle(const ProtocolConfig& c, const ExcitationProfile& profile,
                         double detuning, Rng& rng, double field_offset = 0.0) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  double u[6];
  for (double& x : u) x = uniform(rng);
  const double noise = normal(rng);

  ProtocolRecord r;
  r.detuning = detuning;
  r.effective_detuning = detuning - c.omega_c_S * field_offset;

  // (i)
  const double p0 = ground_probability(c.sideband_cooling_residual);
  const bool cooled_S = u[0] < p0;
  const bool cooled_L = u[1] < p0;
  // (ii)
  const bool excited = u[2] < profile(r.effective_detuning);
  r.n_c_S = excited ? 1 : 0;
  r.spectroscopy_axial_shift = spectroscopy_axial_shift(c, excited);
  // (iii)
  r.transfer_iii = excited && cooled_S && u[3] < c.pi_pulse_fidelity;
  // (iv)
  r.exchange_iv = r.transfer_iii && u[4] < c.swap_fidelity;
  // (v) a residual logic axial quantum is converted as well
  const bool logic_quantum = r.exchange_iv || !cooled_L;
  r.transfer_v = logic_quantum && u[5] < c.pi_pulse_fidelity;
  // (vi)
  const double true_shift = r.transfer_v ? c.shifts_L.delta : 0.0;
  r.measured_shift = true_shift + c.detection.sigma() * noise;
  r.declared_jump = r.measured_shift >= c.detection.threshold;
  // (vii)
  r.elapsed = c.cycle_time();
  return r;
}

template <typename Rng>
ProtocolRecord run_cycle(const ProtocolConfig& c, double detuning, Rng& rng,
                         double field_offset = 0.0) {
  return run_cycle(c, c.excitation(), detuning, rng, field_offset);
}

/// Closed-form stage probabilities for independent stages at fixed detuning.
struct StageProbabilities {
  double excitation;
  double ground;           // per mode after cooling
  double logic_converted;  // P(n_c^L = 1 after step v)
  double detect_given_jump;
  double false_positive;
  double jump;  // P(declared jump)
};

inline double normal_survival(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline StageProbabilities stage_probabilities(const ProtocolConfig& c, double detuning) {
  StageProbabilities s{};
  s.excitation = c.excitation()(detuning);
  s.ground = ground_probability(c.sideband_cooling_residual);
  const double delivered = s.excitation * s.ground * c.pi_pulse_fidelity * c.swap_fidelity;
  s.logic_converted = c.pi_pulse_fidelity * (1.0 - s.ground * (1.0 - delivered));
  const double sigma = c.detection.sigma();
  const double thr = c.detection.threshold;
  if (sigma == 0.0) {
    s.detect_given_jump = c.shifts_L.delta >= thr ? 1.0 : 0.0;
    s.false_positive = 0.0 >= thr ? 1.0 : 0.0;
  } else {
    s.detect_given_jump = normal_survival((thr - c.shifts_L.delta) / sigma);
    s.false_positive = normal_survival(thr / sigma);
  }
  s.jump = s.logic_converted * s.detect_given_jump + (1.0 - s.logic_converted) * s.false_positive;
  return s;
}

struct Lineshape {
  std::vector<double> detuning;  // [rad/s]
  std::vector<double> fraction;
  std::vector<double> error;  // binomial standard error
  std::vector<std::size_t> jumps;
  std::size_t cycles = 0;  // per point
};

namespace detail {

template <typename Sink>
void run_point(const ProtocolConfig& c, const ExcitationProfile& profile, std::size_t index,
               double detuning, Sink&& sink) {
  auto rng = point_stream(c.seed, index);
  std::normal_distribution<double> step(0.0, 1.0);
  double offset = 0.0;
  for (std::size_t k = 0; k < c.cycles; ++k) {
    auto rec = run_cycle(c, profile, detuning, rng, offset);
    rec.point = index;
    rec.cycle = k;
    // Random walk of the field: 1-sigma step field_noise per sqrt(minute).
    const double kick = step(rng);
    offset += c.field_noise * std::sqrt(rec.elapsed / 60.0) * kick;
    sink(rec);
  }
}

}  // namespace detail

/// Excitation fraction at each grid point. Point i uses stream (seed, i), so
/// points may be evaluated in any order or concurrently.
inline Lineshape lineshape_scan(const ProtocolConfig& c) {
  c.validate();
  if (c.drive.detuning_grid.empty()) throw DomainError("lineshape_scan: empty detuning grid");
  const auto profile = c.excitation();
  Lineshape ls;
  ls.cycles = c.cycles;
  for (std::size_t i = 0; i < c.drive.detuning_grid.size(); ++i) {
    const double det = c.drive.detuning_grid[i];
    std::size_t jumps = 0;
    detail::run_point(c, profile, i, det, [&](const ProtocolRecord& r) { jumps += r.declared_jump; });
    const double f = static_cast<double>(jumps) / static_cast<double>(c.cycles);
    ls.detuning.push_back(det);
    ls.jumps.push_back(jumps);
    ls.fraction.push_back(f);
    ls.error.push_back(std::sqrt(f * (1.0 - f) / static_cast<double>(c.cycles)));
  }
  return ls;
}

/// Full record stream, grid point by grid point.
inline std::vector<ProtocolRecord> protocol_records(const ProtocolConfig& c) {
  c.validate();
  const auto profile = c.excitation();
  std::vector<ProtocolRecord> out;
  out.reserve(c.cycles * c.drive.detuning_grid.size());
  for (std::size_t i = 0; i < c.drive.detuning_grid.size(); ++i)
    detail::run_point(c, profile, i, c.drive.detuning_grid[i],
                      [&](const ProtocolRecord& r) { out.push_back(r); });
  return out;
}

/// Moment summary of a lineshape: fraction-weighted mean and standard
/// deviation over the grid, with the binomial error propagated to the mean.
struct LineFit {
  double center = 0.0;        // [rad/s]
  double width = 0.0;         // [rad/s]
  double center_error = 0.0;  // [rad/s]
  double amplitude = 0.0;
  double jump_rate = 0.0;  // mean fraction over the grid
  bool valid = false;
};

inline LineFit fit_lineshape(const Lineshape& ls) {
  LineFit f;
  double sum = 0.0, m1 = 0.0;
  for (std::size_t i = 0; i < ls.detuning.size(); ++i) {
    sum += ls.fraction[i];
    m1 += ls.fraction[i] * ls.detuning[i];
    f.amplitude = std::max(f.amplitude, ls.fraction[i]);
  }
  if (!ls.detuning.empty()) f.jump_rate = sum / static_cast<double>(ls.detuning.size());
  if (sum <= 0.0) return f;
  f.center = m1 / sum;
  double m2 = 0.0, var_center = 0.0;
  for (std::size_t i = 0; i < ls.detuning.size(); ++i) {
    const double d = ls.detuning[i] - f.center;
    m2 += ls.fraction[i] * d * d;
    const double dmean = d / sum;
    // Zero-count points still carry counting uncertainty ~ 1/N.
    const double err = ls.fraction[i] > 0.0 && ls.fraction[i] < 1.0
                           ? ls.error[i]
                           : 1.0 / static_cast<double>(std::max<std::size_t>(ls.cycles, 1));
    var_center += dmean * dmean * err * err;
  }
  f.width = std::sqrt(m2 / sum);
  f.center_error = std::sqrt(var_center);
  f.valid = true;
  return f;
}

/// Grid from -below to +above profile widths around the line, where the
/// width includes the field drift accumulated over one grid point.
inline std::vector<double> auto_grid(const ProtocolConfig& c, double below, double above,
                                     std::size_t points) {
  if (points < 2) throw DomainError("auto_grid: need at least two points");
  const double point_duration = static_cast<double>(c.cycles) * c.cycle_time();
  const double drift = c.omega_c_S * c.field_noise * std::sqrt(point_duration / 60.0);
  const double width = std::hypot(c.excitation().width(), drift);
  if (!(width > 0.0)) throw DomainError("auto_grid: line has zero width");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = width * (-below + (above + below) * static_cast<double>(i) /
                                 static_cast<double>(points - 1));
  return g;
}

struct TimingBudget {
  double cooling = 0.0;
  double drive = 0.0;
  double pi_pulses = 0.0;
  double exchange = 0.0;
  double detection = 0.0;
  double total = 0.0;
  double throughput = 0.0;  // cycles per second
  bool exchange_dominates = false;
  double required_averaging = 0.0;  // for the logic shift [s]
  double reference_delta = 0.0;     // shift used for the speedup comparison [rad/s]
  double detection_speedup = 0.0;   // reference vs logic-trap detection time
};

/// Stage durations of one cycle. `reference_delta`, when nonzero, is the
/// bottle shift of a comparison setup (e.g. a single trap with a weaker
/// bottle) for the detection-time ratio.
inline TimingBudget timing_budget(const ProtocolConfig& c, double reference_delta = 0.0) {
  TimingBudget t;
  t.cooling = c.times.cooling;
  t.drive = c.times.drive;
  t.pi_pulses = 2.0 * c.times.pi_pulse;
  t.exchange = c.budget.t_ex;
  t.detection = c.detection.averaging_time + c.detection.overhead;
  t.total = t.cooling + t.drive + t.pi_pulses + t.exchange + t.detection;
  t.throughput = t.total > 0.0 ? 1.0 / t.total : 0.0;
  t.exchange_dominates =
      t.exchange >= std::max({t.cooling, t.drive, t.pi_pulses, t.detection});
  t.required_averaging = required_averaging_time(c.detection, c.shifts_L.delta);
  t.reference_delta = reference_delta;
  if (reference_delta != 0.0)
    t.detection_speedup = detection_speedup(c.detection, reference_delta, c.shifts_L.delta);
  return t;
}

/// Line-center statistics for a scan of the given total duration, with the
/// cycle budget spread evenly over the grid.
struct StatisticalProjection {
  double duration = 0.0;  // [s]
  std::size_t cycles_per_point = 0;
  LineFit fit;
  double fractional_center_error = 0.0;  // center_error / omega_c
};

inline StatisticalProjection project_statistics(ProtocolConfig c, double duration,
                                                std::size_t points = 41) {
  StatisticalProjection p;
  p.duration = duration;
  const double per_point = duration / static_cast<double>(points);
  c.cycles = std::max<std::size_t>(1, static_cast<std::size_t>(per_point / c.cycle_time()));
  c.drive.detuning_grid = auto_grid(c, 4.0, 6.0, points);
  p.cycles_per_point = c.cycles;
  p.fit = fit_lineshape(lineshape_scan(c));
  p.fractional_center_error = p.fit.center_error / c.omega_c_S;
  return p;
}

}  // namespace qls
