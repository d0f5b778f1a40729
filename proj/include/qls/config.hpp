#pragma once

// Run configuration: a strict JSON schema mirroring the domain types.
//
// Values are kept in file units (frequencies in Hz) so that load -> dump ->
// load is exact; conversion to rad/s happens once, in the builders at the
// bottom of this header. Unknown keys are rejected with their JSON pointer.
// The schema is documented in docs/config.md.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qls/circuit.hpp"
#include "qls/constants.hpp"
#include "qls/dynamics.hpp"
#include "qls/error.hpp"
#include "qls/magnetics.hpp"
#include "qls/protocol.hpp"
#include "qls/spectroscopy.hpp"

namespace qls {

using Json = nlohmann::ordered_json;

struct TrapBlock {
  double d_eff_m = 0.0;
  double field_T = 0.0;
  double B2_T_per_m2 = 0.0;
  double axial_temperature_K = 0.0;
  bool operator==(const TrapBlock&) const = default;
};

struct TrapsBlock {
  double axial_frequency_Hz = 0.0;
  TrapBlock logic;
  TrapBlock spectroscopy;
  bool operator==(const TrapsBlock&) const = default;
};

// The resonator sits below the axial frequency by either a number of its own
// linewidths or a fixed offset in Hz; exactly one is given.
struct ResonatorBlock {
  double capacitance_F = 0.0;
  double resistance_Ohm = 0.0;
  std::optional<double> detune_linewidths;
  std::optional<double> detune_Hz;
  bool operator==(const ResonatorBlock&) const = default;
};

struct BudgetBlock {
  double temperature_K = 0.0;
  double feasibility_threshold = 1.0;
  bool operator==(const BudgetBlock&) const = default;
};

struct MagnetBlock {
  double inner_radius_m = 0.0;
  double outer_radius_m = 0.0;
  double height_m = 0.0;
  double mu0M_T = 0.0;
  double center_z_m = 0.0;
  std::optional<double> calibrate_B2_T_per_m2;
  double background_T = 0.0;
  double z_start_m = 0.0;
  double z_stop_m = 0.0;
  std::uint64_t points = 2;
  double logic_z_m = 0.0;
  double spectroscopy_z_m = 0.05;
  bool operator==(const MagnetBlock&) const = default;
};

struct HeatingBlock {
  HeatingModel model;
  double temperature_K = 0.01;
  bool operator==(const HeatingBlock&) const = default;
};

struct GridBlock {
  enum class Kind { list, range, automatic };
  Kind kind = Kind::automatic;
  std::vector<double> detunings_Hz;  // list
  double start_Hz = 0.0;             // range
  double stop_Hz = 0.0;
  double widths_below = 2.0;  // automatic
  double widths_above = 10.0;
  std::uint64_t points = 61;
  bool operator==(const GridBlock&) const = default;
};

struct DriveBlock {
  LineProfile profile = LineProfile::exponential;
  double peak_probability = 1.0;
  double width_Hz = 0.0;
  GridBlock grid;
  bool operator==(const DriveBlock&) const = default;
};

struct DetectionBlock {
  double averaging_time_s = 0.05;
  double noise_density_Hz_rtHz = 0.1;  // frequency noise [Hz * sqrt(s)]
  double threshold_fraction = 0.5;     // of the logic bottle shift
  double separation_sigmas = 3.0;
  double overhead_s = 0.0;
  double reference_B2_T_per_m2 = 300.0;  // comparison bottle for the speedup report
  bool operator==(const DetectionBlock&) const = default;
};

struct TimesBlock {
  double cooling_s = 0.1;
  double drive_s = 0.0;
  double pi_pulse_s = 0.0;
  bool operator==(const TimesBlock&) const = default;
};

struct ProtocolBlock {
  double pi_pulse_fidelity = 1.0;
  std::optional<double> swap_fidelity;  // empty: computed from the budget
  std::uint64_t n_max = 4;
  double sideband_cooling_residual = 0.0;
  double field_noise_per_sqrt_minute = 0.0;
  std::uint64_t cycles = 1000;
  bool anomaly = false;
  DetectionBlock detection;
  DriveBlock drive;
  TimesBlock times;
  bool operator==(const ProtocolBlock&) const = default;
};

struct OutputBlock {
  std::string directory;
  std::string format = "csv";
  bool operator==(const OutputBlock&) const = default;
};

struct RunConfig {
  std::string scenario;
  std::string species = "electron";
  std::uint64_t seed = 1;
  OutputBlock output;
  ResonatorBlock resonator;
  BudgetBlock budget;
  TrapsBlock traps;
  std::optional<MagnetBlock> magnet;
  std::optional<HeatingBlock> heating;
  std::optional<ProtocolBlock> protocol;
  bool operator==(const RunConfig&) const = default;
};

namespace detail {

/// Reads one JSON object, tracking consumed keys.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "/" : path_, "expected an object");
  }

  std::string child(const std::string& key) const { return path_ + "/" + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& at(const std::string& key) {
    if (!j_.contains(key)) throw SchemaError(child(key), "missing required key");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number()) throw SchemaError(child(key), "expected a number");
    return v.get<double>();
  }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) {
    if (!has(key) || j_.at(key).is_null()) {
      seen_.insert(key);
      return std::nullopt;
    }
    return number(key);
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw SchemaError(child(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    return has(key) ? unsigned_integer(key) : fallback;
  }

  std::string string(const std::string& key) {
    const Json& v = at(key);
    if (!v.is_string()) throw SchemaError(child(key), "expected a string");
    return v.get<std::string>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_boolean()) throw SchemaError(child(key), "expected true or false");
    return v.get<bool>();
  }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.contains(item.key())) throw SchemaError(child(item.key()), "unknown key");
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

inline TrapBlock read_trap(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  TrapBlock t;
  t.d_eff_m = r.number("d_eff_m");
  t.field_T = r.number("field_T");
  t.B2_T_per_m2 = r.number("B2_T_per_m2");
  t.axial_temperature_K = r.number("axial_temperature_K");
  r.finish();
  return t;
}

inline MagnetBlock read_magnet(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  MagnetBlock m;
  m.inner_radius_m = r.number("inner_radius_m");
  m.outer_radius_m = r.number("outer_radius_m");
  m.height_m = r.number("height_m");
  m.mu0M_T = r.number("mu0M_T");
  m.center_z_m = r.number("center_z_m", 0.0);
  m.calibrate_B2_T_per_m2 = r.optional_number("calibrate_B2_T_per_m2");
  m.background_T = r.number("background_T", 0.0);
  m.z_start_m = r.number("z_start_m");
  m.z_stop_m = r.number("z_stop_m");
  m.points = r.unsigned_integer("points");
  m.logic_z_m = r.number("logic_z_m", 0.0);
  m.spectroscopy_z_m = r.number("spectroscopy_z_m", 0.05);
  r.finish();
  if (m.points < 2) throw SchemaError(r.child("points"), "need at least two points");
  return m;
}

inline HeatingBlock read_heating(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  HeatingBlock h;
  const HeatingModel defaults;
  h.model.S_E_ref = r.number("S_E_ref_V2_per_m2_Hz", defaults.S_E_ref);
  h.model.freq_exp = r.number("frequency_exponent", defaults.freq_exp);
  h.model.dist_exp = r.number("distance_exponent", defaults.dist_exp);
  h.model.temp_exp = r.number("temperature_exponent", defaults.temp_exp);
  h.model.ref_freq = r.number("reference_frequency_Hz", defaults.ref_freq);
  h.model.ref_dist = r.number("reference_distance_m", defaults.ref_dist);
  h.model.ref_temp = r.number("reference_temperature_K", defaults.ref_temp);
  h.temperature_K = r.number("temperature_K", h.temperature_K);
  r.finish();
  return h;
}

inline GridBlock read_grid(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  GridBlock g;
  const std::string kind = r.string("kind");
  if (kind == "list") {
    g.kind = GridBlock::Kind::list;
    const Json& list = r.at("detunings_Hz");
    if (!list.is_array() || list.empty())
      throw SchemaError(r.child("detunings_Hz"), "expected a non-empty array of numbers");
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!list[i].is_number())
        throw SchemaError(r.child("detunings_Hz") + "/" + std::to_string(i), "expected a number");
      g.detunings_Hz.push_back(list[i].get<double>());
    }
  } else if (kind == "range") {
    g.kind = GridBlock::Kind::range;
    g.start_Hz = r.number("start_Hz");
    g.stop_Hz = r.number("stop_Hz");
    g.points = r.unsigned_integer("points");
  } else if (kind == "auto") {
    g.kind = GridBlock::Kind::automatic;
    g.widths_below = r.number("widths_below", g.widths_below);
    g.widths_above = r.number("widths_above", g.widths_above);
    g.points = r.unsigned_integer("points", g.points);
  } else {
    throw SchemaError(r.child("kind"), "expected one of list, range, auto");
  }
  r.finish();
  if (g.kind != GridBlock::Kind::list && g.points < 2)
    throw SchemaError(path + "/points", "need at least two points");
  return g;
}

inline ProtocolBlock read_protocol(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  ProtocolBlock p;
  p.pi_pulse_fidelity = r.number("pi_pulse_fidelity", p.pi_pulse_fidelity);
  p.swap_fidelity = r.optional_number("swap_fidelity");
  p.n_max = r.unsigned_integer("n_max", p.n_max);
  p.sideband_cooling_residual = r.number("sideband_cooling_residual", p.sideband_cooling_residual);
  p.field_noise_per_sqrt_minute =
      r.number("field_noise_per_sqrt_minute", p.field_noise_per_sqrt_minute);
  p.cycles = r.unsigned_integer("cycles", p.cycles);
  p.anomaly = r.boolean("anomaly", p.anomaly);

  {
    ObjectReader d(r.at("detection"), r.child("detection"));
    auto& det = p.detection;
    det.averaging_time_s = d.number("averaging_time_s", det.averaging_time_s);
    det.noise_density_Hz_rtHz = d.number("noise_density_Hz_rtHz", det.noise_density_Hz_rtHz);
    det.threshold_fraction = d.number("threshold_fraction", det.threshold_fraction);
    det.separation_sigmas = d.number("separation_sigmas", det.separation_sigmas);
    det.overhead_s = d.number("overhead_s", det.overhead_s);
    det.reference_B2_T_per_m2 = d.number("reference_B2_T_per_m2", det.reference_B2_T_per_m2);
    d.finish();
  }
  {
    ObjectReader d(r.at("drive"), r.child("drive"));
    const std::string profile = d.string("profile", "exponential");
    if (profile == "exponential")
      p.drive.profile = LineProfile::exponential;
    else if (profile == "gaussian")
      p.drive.profile = LineProfile::gaussian;
    else
      throw SchemaError(d.child("profile"), "expected exponential or gaussian");
    p.drive.peak_probability = d.number("peak_probability", p.drive.peak_probability);
    p.drive.width_Hz = d.number("width_Hz", p.drive.width_Hz);
    p.drive.grid = read_grid(d.at("grid"), d.child("grid"));
    d.finish();
  }
  if (r.has("times")) {
    ObjectReader d(r.at("times"), r.child("times"));
    p.times.cooling_s = d.number("cooling_s", p.times.cooling_s);
    p.times.drive_s = d.number("drive_s", p.times.drive_s);
    p.times.pi_pulse_s = d.number("pi_pulse_s", p.times.pi_pulse_s);
    d.finish();
  }
  r.finish();
  if (p.cycles < 1) throw SchemaError(path + "/cycles", "must be at least 1");
  if (p.n_max < 2) throw SchemaError(path + "/n_max", "must be at least 2");
  return p;
}

}  // namespace detail

// ---- builders: file units -> domain types ----------------------------------

inline Particle particle(const RunConfig& c) { return particle_by_name(c.species); }

inline TrapParams make_trap(const RunConfig& c, TrapRole role) {
  const TrapBlock& t = role == TrapRole::logic ? c.traps.logic : c.traps.spectroscopy;
  TrapParams p{t.d_eff_m, hz_to_angular(c.traps.axial_frequency_Hz), t.field_T, t.B2_T_per_m2,
               t.axial_temperature_K, role};
  p.validate();
  return p;
}

inline double detune_linewidths(const RunConfig& c) {
  const auto& r = c.resonator;
  if (r.detune_linewidths) return *r.detune_linewidths;
  return hz_to_angular(r.detune_Hz.value_or(0.0)) * r.capacitance_F * r.resistance_Ohm;
}

inline ResonatorParams make_resonator(const RunConfig& c) {
  return ResonatorParams::detuned_below(c.resonator.capacitance_F, c.resonator.resistance_Ohm,
                                        hz_to_angular(c.traps.axial_frequency_Hz),
                                        detune_linewidths(c));
}

inline ExchangeBudget make_budget(const RunConfig& c) {
  return qls_budget(make_resonator(c), make_trap(c, TrapRole::logic),
                    make_trap(c, TrapRole::spectroscopy), c.budget.temperature_K,
                    detune_linewidths(c), particle(c), c.budget.feasibility_threshold);
}

/// Ring from the magnet block, with the calibration applied at the logic-trap
/// position when requested.
inline RingMagnet make_magnet(const MagnetBlock& m) {
  auto ring = RingMagnet::from_polarization(m.inner_radius_m, m.outer_radius_m, m.height_m,
                                            m.mu0M_T, m.center_z_m);
  if (m.calibrate_B2_T_per_m2) ring = calibrate_to_B2(ring, *m.calibrate_B2_T_per_m2, m.logic_z_m);
  return ring;
}

inline std::vector<double> make_grid(const GridBlock& g, const ProtocolConfig& pc) {
  switch (g.kind) {
    case GridBlock::Kind::list: {
      std::vector<double> out;
      for (double hz : g.detunings_Hz) out.push_back(hz_to_angular(hz));
      return out;
    }
    case GridBlock::Kind::range:
      return linspace(hz_to_angular(g.start_Hz), hz_to_angular(g.stop_Hz), g.points);
    case GridBlock::Kind::automatic:
      return auto_grid(pc, g.widths_below, g.widths_above, g.points);
  }
  return {};
}

inline ProtocolConfig make_protocol(const RunConfig& c) {
  if (!c.protocol) throw SchemaError("/protocol", "missing required block");
  const ProtocolBlock& p = *c.protocol;
  const Particle part = particle(c);
  const auto trap_L = make_trap(c, TrapRole::logic);
  const auto trap_S = make_trap(c, TrapRole::spectroscopy);

  ProtocolConfig pc;
  pc.budget = make_budget(c);
  pc.shifts_L = shift_set(trap_L, part);
  pc.shifts_S = shift_set(trap_S, part);
  pc.omega_c_S = cyclotron_frequency(trap_S.B, part);
  pc.g = part.g;
  pc.swap_fidelity = p.swap_fidelity
                         ? *p.swap_fidelity
                         : swap_fidelity(ExchangeParams::from_budget(pc.budget),
                                         static_cast<int>(p.n_max));
  pc.pi_pulse_fidelity = p.pi_pulse_fidelity;
  pc.sideband_cooling_residual = p.sideband_cooling_residual;
  pc.detection.averaging_time = p.detection.averaging_time_s;
  pc.detection.noise_density = hz_to_angular(p.detection.noise_density_Hz_rtHz);
  pc.detection.threshold = p.detection.threshold_fraction * pc.shifts_L.delta;
  pc.detection.separation_sigmas = p.detection.separation_sigmas;
  pc.detection.overhead = p.detection.overhead_s;
  pc.drive.profile = p.drive.profile;
  pc.drive.peak_probability = p.drive.peak_probability;
  pc.drive.drive_width = hz_to_angular(p.drive.width_Hz);
  pc.field_noise = p.field_noise_per_sqrt_minute;
  pc.times = {p.times.cooling_s, p.times.drive_s, p.times.pi_pulse_s};
  pc.cycles = p.cycles;
  pc.seed = c.seed;
  pc.anomaly = p.anomaly;
  pc.drive.detuning_grid = make_grid(p.drive.grid, pc);
  pc.validate();
  return pc;
}

/// Bottle shift of the comparison setup used by the detection speedup report.
inline double reference_delta(const RunConfig& c) {
  if (!c.protocol) return 0.0;
  const Particle part = particle(c);
  return bottle_delta(c.protocol->detection.reference_B2_T_per_m2,
                      hz_to_angular(c.traps.axial_frequency_Hz), part.mass, part.charge);
}

// ---- load / dump ------------------------------------------------------------

namespace detail {

// Physical validation of a parsed config; domain errors are reported at the
// path of the block that produced them.
inline void validate_physics(const RunConfig& c) {
  auto guarded = [](const std::string& path, auto&& fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      throw SchemaError(path, e.what());
    }
  };
  guarded("/species", [&] { particle(c); });
  guarded("/traps/logic", [&] { make_trap(c, TrapRole::logic); });
  guarded("/traps/spectroscopy", [&] { make_trap(c, TrapRole::spectroscopy); });
  guarded("/resonator", [&] { make_resonator(c); });
  guarded("/budget", [&] {
    if (c.budget.temperature_K < 0.0) throw DomainError("temperature must be non-negative");
    if (!(c.budget.feasibility_threshold > 0.0))
      throw DomainError("feasibility threshold must be positive");
  });
  if (c.magnet) guarded("/magnet", [&] { make_magnet(*c.magnet); });
  if (c.heating) guarded("/heating", [&] {
      if (!(c.heating->temperature_K > 0.0)) throw DomainError("temperature must be positive");
    });
  if (c.output.format != "csv" && c.output.format != "records")
    throw SchemaError("/output/format", "expected csv or records");
}

}  // namespace detail

inline RunConfig load_config(const Json& j) {
  detail::ObjectReader r(j, "");
  RunConfig c;
  c.scenario = r.string("scenario");
  c.species = r.string("species", c.species);
  c.seed = r.unsigned_integer("seed", c.seed);
  if (r.has("output")) {
    detail::ObjectReader o(r.at("output"), "/output");
    c.output.directory = o.string("directory", "");
    c.output.format = o.string("format", "csv");
    o.finish();
  }
  {
    detail::ObjectReader o(r.at("resonator"), "/resonator");
    c.resonator.capacitance_F = o.number("capacitance_F");
    c.resonator.resistance_Ohm = o.number("resistance_Ohm");
    if (o.has("detune_linewidths") == o.has("detune_Hz"))
      throw SchemaError("/resonator", "give exactly one of detune_linewidths, detune_Hz");
    if (o.has("detune_linewidths"))
      c.resonator.detune_linewidths = o.number("detune_linewidths");
    else
      c.resonator.detune_Hz = o.number("detune_Hz");
    o.finish();
  }
  {
    detail::ObjectReader o(r.at("budget"), "/budget");
    c.budget.temperature_K = o.number("temperature_K");
    c.budget.feasibility_threshold = o.number("feasibility_threshold", 1.0);
    o.finish();
  }
  {
    detail::ObjectReader o(r.at("traps"), "/traps");
    c.traps.axial_frequency_Hz = o.number("axial_frequency_Hz");
    c.traps.logic = detail::read_trap(o.at("logic"), "/traps/logic");
    c.traps.spectroscopy = detail::read_trap(o.at("spectroscopy"), "/traps/spectroscopy");
    o.finish();
  }
  if (r.has("magnet")) c.magnet = detail::read_magnet(r.at("magnet"), "/magnet");
  if (r.has("heating")) c.heating = detail::read_heating(r.at("heating"), "/heating");
  if (r.has("protocol")) c.protocol = detail::read_protocol(r.at("protocol"), "/protocol");
  r.finish();
  detail::validate_physics(c);
  return c;
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("/", std::string("malformed JSON: ") + e.what());
  }
}

inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("/", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(parse_json_text(ss.str()));
}

inline Json dump_config(const RunConfig& c) {
  Json j;
  j["scenario"] = c.scenario;
  j["species"] = c.species;
  j["seed"] = c.seed;
  j["output"] = {{"directory", c.output.directory}, {"format", c.output.format}};
  j["resonator"] = {{"capacitance_F", c.resonator.capacitance_F},
                    {"resistance_Ohm", c.resonator.resistance_Ohm}};
  if (c.resonator.detune_linewidths)
    j["resonator"]["detune_linewidths"] = *c.resonator.detune_linewidths;
  else
    j["resonator"]["detune_Hz"] = c.resonator.detune_Hz.value_or(0.0);
  j["budget"] = {{"temperature_K", c.budget.temperature_K},
                 {"feasibility_threshold", c.budget.feasibility_threshold}};
  auto trap = [](const TrapBlock& t) {
    return Json{{"d_eff_m", t.d_eff_m},
                {"field_T", t.field_T},
                {"B2_T_per_m2", t.B2_T_per_m2},
                {"axial_temperature_K", t.axial_temperature_K}};
  };
  j["traps"] = {{"axial_frequency_Hz", c.traps.axial_frequency_Hz},
                {"logic", trap(c.traps.logic)},
                {"spectroscopy", trap(c.traps.spectroscopy)}};
  if (c.magnet) {
    const auto& m = *c.magnet;
    Json mj{{"inner_radius_m", m.inner_radius_m}, {"outer_radius_m", m.outer_radius_m},
            {"height_m", m.height_m},             {"mu0M_T", m.mu0M_T},
            {"center_z_m", m.center_z_m}};
    mj["calibrate_B2_T_per_m2"] =
        m.calibrate_B2_T_per_m2 ? Json(*m.calibrate_B2_T_per_m2) : Json(nullptr);
    mj["background_T"] = m.background_T;
    mj["z_start_m"] = m.z_start_m;
    mj["z_stop_m"] = m.z_stop_m;
    mj["points"] = m.points;
    mj["logic_z_m"] = m.logic_z_m;
    mj["spectroscopy_z_m"] = m.spectroscopy_z_m;
    j["magnet"] = mj;
  }
  if (c.heating) {
    const auto& h = *c.heating;
    j["heating"] = {{"S_E_ref_V2_per_m2_Hz", h.model.S_E_ref},
                    {"frequency_exponent", h.model.freq_exp},
                    {"distance_exponent", h.model.dist_exp},
                    {"temperature_exponent", h.model.temp_exp},
                    {"reference_frequency_Hz", h.model.ref_freq},
                    {"reference_distance_m", h.model.ref_dist},
                    {"reference_temperature_K", h.model.ref_temp},
                    {"temperature_K", h.temperature_K}};
  }
  if (c.protocol) {
    const auto& p = *c.protocol;
    Json pj;
    pj["pi_pulse_fidelity"] = p.pi_pulse_fidelity;
    pj["swap_fidelity"] = p.swap_fidelity ? Json(*p.swap_fidelity) : Json(nullptr);
    pj["n_max"] = p.n_max;
    pj["sideband_cooling_residual"] = p.sideband_cooling_residual;
    pj["field_noise_per_sqrt_minute"] = p.field_noise_per_sqrt_minute;
    pj["cycles"] = p.cycles;
    pj["anomaly"] = p.anomaly;
    pj["detection"] = {{"averaging_time_s", p.detection.averaging_time_s},
                       {"noise_density_Hz_rtHz", p.detection.noise_density_Hz_rtHz},
                       {"threshold_fraction", p.detection.threshold_fraction},
                       {"separation_sigmas", p.detection.separation_sigmas},
                       {"overhead_s", p.detection.overhead_s},
                       {"reference_B2_T_per_m2", p.detection.reference_B2_T_per_m2}};
    Json grid;
    switch (p.drive.grid.kind) {
      case GridBlock::Kind::list:
        grid = {{"kind", "list"}, {"detunings_Hz", p.drive.grid.detunings_Hz}};
        break;
      case GridBlock::Kind::range:
        grid = {{"kind", "range"},
                {"start_Hz", p.drive.grid.start_Hz},
                {"stop_Hz", p.drive.grid.stop_Hz},
                {"points", p.drive.grid.points}};
        break;
      case GridBlock::Kind::automatic:
        grid = {{"kind", "auto"},
                {"widths_below", p.drive.grid.widths_below},
                {"widths_above", p.drive.grid.widths_above},
                {"points", p.drive.grid.points}};
        break;
    }
    pj["drive"] = {{"profile", to_string(p.drive.profile)},
                   {"peak_probability", p.drive.peak_probability},
                   {"width_Hz", p.drive.width_Hz},
                   {"grid", grid}};
    pj["times"] = {{"cooling_s", p.times.cooling_s},
                   {"drive_s", p.times.drive_s},
                   {"pi_pulse_s", p.times.pi_pulse_s}};
    j["protocol"] = pj;
  }
  return j;
}

/// Converts "a.b.c" to the JSON pointer "/a/b/c"; pointers pass through.
inline Json::json_pointer axis_pointer(const std::string& axis) {
  if (!axis.empty() && axis.front() == '/') return Json::json_pointer(axis);
  std::string p;
  std::stringstream ss(axis);
  std::string part;
  while (std::getline(ss, part, '.')) p += "/" + part;
  return Json::json_pointer(p);
}

/// Copy of `j` with the numeric leaf at `axis` set to `value`.
inline Json with_axis_value(const Json& j, const std::string& axis, double value) {
  const auto ptr = axis_pointer(axis);
  if (!j.contains(ptr)) throw SchemaError(ptr.to_string(), "sweep axis not present in config");
  if (!j.at(ptr).is_number())
    throw SchemaError(ptr.to_string(), "sweep axis is not a numeric leaf");
  Json out = j;
  out[ptr] = value;
  return out;
}

}  // namespace qls
