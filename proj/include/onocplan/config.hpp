#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "onocplan/costmodel.hpp"
#include "onocplan/mapping.hpp"
#include "onocplan/model.hpp"
#include "onocplan/netsim.hpp"
#include "onocplan/optimizer.hpp"

namespace onoc {

using json = nlohmann::json;

struct SweepSpec {
  std::optional<int> period;  // absent = sweep all periods uniformly
  int from = 1;
  int to = 64;
  int step = 1;
};

struct RunSection {
  Strategy strategy = Strategy::overlapped;
  Backend backend = Backend::onoc;
  Method method = Method::closed_form;
  int fnp_cores = 200;
  std::string out;             // report file; empty = stdout only
  std::string format = "json"; // json | csv
  bool overwrite = false;
  std::optional<std::vector<int>> allocation;  // explicit forward-half core counts
  std::optional<SweepSpec> sweep;
  unsigned long long seed = 0;  // echoed for randomized harnesses; commands are deterministic
};

struct RunConfig {
  FcnnSpec fcnn;
  OnocConfig onoc;
  WorkloadOverrides overrides;
  long long neurons_per_core_ref = 1;
  EnocParams enoc;
  RunSection run;
};

namespace cfg {

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw ValidationError(path + ": " + msg);
}

// Exact numeric parsing: integers stay integers, doubles convert to their
// exact binary rational, strings may spell "num/den".
inline Rat get_rat(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return Rat(v.get<long long>());
    if (v.is_number_unsigned()) return Rat(static_cast<long long>(v.get<unsigned long long>()));
    if (v.is_number_float()) return Rat::from_double(v.get<double>());
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      const auto slash = s.find('/');
      if (slash == std::string::npos) return Rat(std::stoll(s));
      return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, std::string("not a usable number (") + e.what() + ")");
  }
  fail(path, "expected a number or a \"num/den\" string");
}

inline json rat_to_json(const Rat& r) {
  if (r.is_integer()) return json(r.num());
  return json(r.str());
}

template <typename T>
inline T get_scalar(const json& v, const std::string& path);

template <>
inline long long get_scalar<long long>(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) fail(path, "expected an integer");
  return v.get<long long>();
}

template <>
inline int get_scalar<int>(const json& v, const std::string& path) {
  const long long x = get_scalar<long long>(v, path);
  if (x < -2147483647LL || x > 2147483647LL) fail(path, "integer out of range");
  return static_cast<int>(x);
}

template <>
inline double get_scalar<double>(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

template <>
inline bool get_scalar<bool>(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected true or false");
  return v.get<bool>();
}

template <>
inline std::string get_scalar<std::string>(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

// Section reader that rejects unknown keys so typos surface as errors.
class Section {
 public:
  Section(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
    if (!j.is_object()) fail(path_, "expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.push_back(key);
    const auto it = j_->find(key);
    if (it == j_->end()) return;
    out = get_scalar<T>(*it, path_ + "." + key);
  }

  void read_rat(const char* key, Rat& out) {
    seen_.push_back(key);
    const auto it = j_->find(key);
    if (it == j_->end()) return;
    out = get_rat(*it, path_ + "." + key);
  }

  bool read_rat_list(const char* key, std::vector<Rat>& out) {
    seen_.push_back(key);
    const auto it = j_->find(key);
    if (it == j_->end()) return false;
    if (!it->is_array()) fail(path_ + "." + key, "expected an array");
    out.clear();
    for (size_t k = 0; k < it->size(); ++k)
      out.push_back(get_rat((*it)[k], path_ + "." + key + "[" + std::to_string(k) + "]"));
    return true;
  }

  template <typename T>
  bool read_list(const char* key, std::vector<T>& out) {
    seen_.push_back(key);
    const auto it = j_->find(key);
    if (it == j_->end()) return false;
    if (!it->is_array()) fail(path_ + "." + key, "expected an array");
    out.clear();
    for (size_t k = 0; k < it->size(); ++k)
      out.push_back(get_scalar<T>((*it)[k], path_ + "." + key + "[" + std::to_string(k) + "]"));
    return true;
  }

  const json* subsection(const char* key) {
    seen_.push_back(key);
    const auto it = j_->find(key);
    if (it == j_->end()) return nullptr;
    if (!it->is_object()) fail(path_ + "." + key, "expected an object");
    return &*it;
  }

  void finish() const {
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
        fail(path_ + "." + it.key(), "unknown field");
  }

 private:
  const json* j_;
  std::string path_;
  std::vector<std::string> seen_;
};

inline Strategy parse_strategy(const std::string& s, const std::string& path) {
  if (s == "fm") return Strategy::fixed;
  if (s == "rrm") return Strategy::round_robin;
  if (s == "orrm") return Strategy::overlapped;
  fail(path, "unknown value '" + s + "' (expected fm|rrm|orrm)");
}

inline Backend parse_backend(const std::string& s, const std::string& path) {
  if (s == "onoc") return Backend::onoc;
  if (s == "enoc") return Backend::enoc;
  fail(path, "unknown value '" + s + "' (expected onoc|enoc)");
}

inline Method parse_method(const std::string& s, const std::string& path) {
  if (s == "closed") return Method::closed_form;
  if (s == "brute") return Method::brute_force;
  fail(path, "unknown value '" + s + "' (expected closed|brute)");
}

}  // namespace cfg

inline RunConfig parse_config(const json& root) {
  if (!root.is_object()) throw ValidationError("config: top level must be a JSON object");
  RunConfig c;
  cfg::Section top(root, "config");

  if (const json* jf = top.subsection("fcnn")) {
    cfg::Section s(*jf, "fcnn");
    s.read_list("layer_sizes", c.fcnn.layer_sizes);
    s.read("batch_size", c.fcnn.batch_size);
    s.read("param_width", c.fcnn.param_width);
    s.read_list("labels", c.fcnn.labels);
    s.finish();
  } else {
    cfg::fail("fcnn", "section is required");
  }

  if (const json* jo = top.subsection("onoc")) {
    cfg::Section s(*jo, "onoc");
    s.read("m", c.onoc.m);
    s.read("lambda_max", c.onoc.lambda_max);
    s.read_rat("phi", c.onoc.phi);
    s.read_rat("clock_hz", c.onoc.clock_hz);
    s.read_rat("bandwidth_per_wavelength", c.onoc.bandwidth_per_wavelength);
    s.read_rat("oe_eo_delay", c.onoc.oe_eo_delay);
    s.read_rat("serialization_delay", c.onoc.serialization_delay);
    s.read("flit_bytes", c.onoc.flit_bytes);
    if (const json* jl = s.subsection("loss")) {
      cfg::Section ls(*jl, "onoc.loss");
      ls.read("il_link_db", c.onoc.loss.il_link_db);
      ls.read("il_router_db", c.onoc.loss.il_router_db);
      ls.read("il_eo_db", c.onoc.loss.il_eo_db);
      ls.read("il_oe_db", c.onoc.loss.il_oe_db);
      ls.finish();
    }
    if (const json* je = s.subsection("energy")) {
      cfg::Section es(*je, "onoc.energy");
      es.read("static_power_watts", c.onoc.energy.static_power_watts);
      es.read("dynamic_joules_per_bit", c.onoc.energy.dynamic_joules_per_bit);
      es.read("joules_per_work_unit", c.onoc.energy.joules_per_work_unit);
      es.read("joules_per_state_transition", c.onoc.energy.joules_per_state_transition);
      es.finish();
    }
    s.finish();
  }

  if (const json* jw = top.subsection("workload")) {
    cfg::Section s(*jw, "workload");
    std::vector<Rat> tmp;
    if (s.read_rat_list("alpha", tmp)) c.overrides.alpha = tmp;
    if (s.read_rat_list("beta", tmp)) c.overrides.beta = tmp;
    if (s.read_rat_list("B", tmp)) c.overrides.B = tmp;
    if (s.read_rat_list("zeta", tmp)) c.overrides.zeta = tmp;
    Rat scratch;
    s.read_rat("C", scratch);
    if (jw->contains("C")) c.overrides.C = scratch;
    s.read_rat("d_input", scratch);
    if (jw->contains("d_input")) c.overrides.d_input = scratch;
    s.read("neurons_per_core_ref", c.neurons_per_core_ref);
    s.finish();
  }

  if (const json* je = top.subsection("enoc")) {
    cfg::Section s(*je, "enoc");
    s.read_rat("hop_latency", c.enoc.hop_latency);
    s.read("flit_bytes", c.enoc.flit_bytes);
    s.read("packet_bytes", c.enoc.packet_bytes);
    s.read_rat("serialization", c.enoc.serialization);
    s.finish();
  }

  if (const json* jr = top.subsection("run")) {
    cfg::Section s(*jr, "run");
    std::string txt;
    txt.clear();
    s.read("strategy", txt);
    if (!txt.empty()) c.run.strategy = cfg::parse_strategy(txt, "run.strategy");
    txt.clear();
    s.read("backend", txt);
    if (!txt.empty()) c.run.backend = cfg::parse_backend(txt, "run.backend");
    txt.clear();
    s.read("method", txt);
    if (!txt.empty()) c.run.method = cfg::parse_method(txt, "run.method");
    s.read("fnp_cores", c.run.fnp_cores);
    s.read("out", c.run.out);
    txt.clear();
    s.read("format", txt);
    if (!txt.empty()) {
      if (txt != "json" && txt != "csv")
        cfg::fail("run.format", "unknown value '" + txt + "' (expected json|csv)");
      c.run.format = txt;
    }
    s.read("overwrite", c.run.overwrite);
    std::vector<int> alloc;
    if (s.read_list("allocation", alloc)) c.run.allocation = alloc;
    if (const json* js = s.subsection("sweep")) {
      cfg::Section ss(*js, "run.sweep");
      SweepSpec sw;
      int p = 0;
      ss.read("period", p);
      if (js->contains("period")) sw.period = p;
      ss.read("from", sw.from);
      ss.read("to", sw.to);
      ss.read("step", sw.step);
      ss.finish();
      c.run.sweep = sw;
    }
    long long seed = 0;
    s.read("seed", seed);
    c.run.seed = static_cast<unsigned long long>(seed);
    s.finish();
  }

  top.finish();

  c.fcnn.validate();
  c.onoc.validate();
  c.enoc.validate();
  if (c.onoc.phi_core_cap() < 1)
    throw ValidationError("onoc.phi: floor(phi*m) < 1, no period can be allocated any cores");
  if (c.run.fnp_cores < 1) throw ValidationError("run.fnp_cores: must be >= 1");
  if (c.neurons_per_core_ref < 1)
    throw ValidationError("workload.neurons_per_core_ref: must be >= 1");
  if (c.run.sweep) {
    const SweepSpec& sw = *c.run.sweep;
    if (sw.from < 1) throw ValidationError("run.sweep.from: must be >= 1");
    if (sw.to < sw.from) throw ValidationError("run.sweep.to: must be >= run.sweep.from");
    if (sw.step < 1) throw ValidationError("run.sweep.step: must be >= 1");
    if (sw.period && (*sw.period < 1 || *sw.period > c.fcnn.l()))
      throw ValidationError("run.sweep.period: must be a forward period in [1, " +
                            std::to_string(c.fcnn.l()) + "]");
  }
  if (c.run.allocation) {
    if (static_cast<int>(c.run.allocation->size()) != c.fcnn.l())
      throw ValidationError("run.allocation: expected " + std::to_string(c.fcnn.l()) +
                            " forward-period entries, got " +
                            std::to_string(c.run.allocation->size()));
  }
  return c;
}

// Fully resolved configuration, exactly rereadable by parse_config.
inline json config_echo(const RunConfig& c) {
  json j;
  j["fcnn"]["layer_sizes"] = c.fcnn.layer_sizes;
  j["fcnn"]["batch_size"] = c.fcnn.batch_size;
  j["fcnn"]["param_width"] = c.fcnn.param_width;
  if (!c.fcnn.labels.empty()) j["fcnn"]["labels"] = c.fcnn.labels;

  json& o = j["onoc"];
  o["m"] = c.onoc.m;
  o["lambda_max"] = c.onoc.lambda_max;
  o["phi"] = cfg::rat_to_json(c.onoc.phi);
  o["clock_hz"] = cfg::rat_to_json(c.onoc.clock_hz);
  o["bandwidth_per_wavelength"] = cfg::rat_to_json(c.onoc.bandwidth_per_wavelength);
  o["oe_eo_delay"] = cfg::rat_to_json(c.onoc.oe_eo_delay);
  o["serialization_delay"] = cfg::rat_to_json(c.onoc.serialization_delay);
  o["flit_bytes"] = c.onoc.flit_bytes;
  o["loss"] = {{"il_link_db", c.onoc.loss.il_link_db},
               {"il_router_db", c.onoc.loss.il_router_db},
               {"il_eo_db", c.onoc.loss.il_eo_db},
               {"il_oe_db", c.onoc.loss.il_oe_db}};
  o["energy"] = {{"static_power_watts", c.onoc.energy.static_power_watts},
                 {"dynamic_joules_per_bit", c.onoc.energy.dynamic_joules_per_bit},
                 {"joules_per_work_unit", c.onoc.energy.joules_per_work_unit},
                 {"joules_per_state_transition", c.onoc.energy.joules_per_state_transition}};

  json w = json::object();
  auto rat_list = [](const std::vector<Rat>& v) {
    json a = json::array();
    for (const Rat& r : v) a.push_back(cfg::rat_to_json(r));
    return a;
  };
  if (c.overrides.alpha) w["alpha"] = rat_list(*c.overrides.alpha);
  if (c.overrides.beta) w["beta"] = rat_list(*c.overrides.beta);
  if (c.overrides.B) w["B"] = rat_list(*c.overrides.B);
  if (c.overrides.C) w["C"] = cfg::rat_to_json(*c.overrides.C);
  if (c.overrides.zeta) w["zeta"] = rat_list(*c.overrides.zeta);
  if (c.overrides.d_input) w["d_input"] = cfg::rat_to_json(*c.overrides.d_input);
  w["neurons_per_core_ref"] = c.neurons_per_core_ref;
  j["workload"] = w;

  j["enoc"] = {{"hop_latency", cfg::rat_to_json(c.enoc.hop_latency)},
               {"flit_bytes", c.enoc.flit_bytes},
               {"packet_bytes", c.enoc.packet_bytes},
               {"serialization", cfg::rat_to_json(c.enoc.serialization)}};

  json& r = j["run"];
  r["strategy"] = strategy_name(c.run.strategy);
  r["backend"] = backend_name(c.run.backend);
  r["method"] = method_name(c.run.method);
  r["fnp_cores"] = c.run.fnp_cores;
  if (!c.run.out.empty()) r["out"] = c.run.out;
  r["format"] = c.run.format;
  if (c.run.overwrite) r["overwrite"] = true;
  if (c.run.allocation) r["allocation"] = *c.run.allocation;
  if (c.run.sweep) {
    json sw;
    if (c.run.sweep->period) sw["period"] = *c.run.sweep->period;
    sw["from"] = c.run.sweep->from;
    sw["to"] = c.run.sweep->to;
    sw["step"] = c.run.sweep->step;
    r["sweep"] = sw;
  }
  r["seed"] = c.run.seed;
  return j;
}

// Default configuration for a small reference network; `defaults` prints it.
inline RunConfig default_config() {
  RunConfig c;
  c.fcnn.layer_sizes = {784, 1000, 500, 10};
  return c;
}

}  // namespace onoc
