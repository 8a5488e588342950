#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "onocplan/rational.hpp"

namespace onoc {

// Thrown for malformed inputs (bad sizes, out-of-range parameters). The CLI
// maps it to exit code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown when a request is well-formed but the model cannot honor it (e.g. a
// closed-form that only holds under a one-round condition). CLI exit code 3.
struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// A fully-connected network: layer_sizes = [n_0, n_1, ..., n_l] where n_0 is
// the input layer. batch_size is the number of samples trained together;
// param_width the bytes per parameter/activation.
struct FcnnSpec {
  std::vector<long long> layer_sizes;
  long long batch_size = 1;
  long long param_width = 4;
  std::vector<std::string> labels;  // optional per-layer activation names, metadata only

  int l() const { return static_cast<int>(layer_sizes.size()) - 1; }

  void validate() const {
    if (layer_sizes.size() < 2)
      throw ValidationError("fcnn.layer_sizes: need at least 2 layers (input plus one trained layer)");
    for (size_t j = 0; j < layer_sizes.size(); ++j)
      if (layer_sizes[j] < 1)
        throw ValidationError("fcnn.layer_sizes[" + std::to_string(j) + "]: must be >= 1");
    if (batch_size < 1) throw ValidationError("fcnn.batch_size: must be >= 1");
    if (param_width < 1) throw ValidationError("fcnn.param_width: must be >= 1");
    if (!labels.empty() && labels.size() != layer_sizes.size())
      throw ValidationError("fcnn.labels: expected one label per layer (" +
                            std::to_string(layer_sizes.size()) + "), got " +
                            std::to_string(labels.size()));
  }
};

enum class Phase { forward, backward };

inline const char* phase_name(Phase p) { return p == Phase::forward ? "fp" : "bp"; }

struct Period {
  Phase phase;
  int layer;           // 1-based trained-layer index
  long long neurons;   // neurons handled in this period
};

// The 2l-period training round of an l-layer network: forward periods 1..l
// handle layers 1..l, backward periods l+1..2l handle layers l..1. A load
// phase (period 0) precedes period 1; its duration is WorkloadParams::d_input.
class PeriodSchedule {
 public:
  PeriodSchedule() = default;
  PeriodSchedule(std::vector<long long> layer_sizes, long long batch, long long width)
      : layer_sizes_(std::move(layer_sizes)), batch_size_(batch), param_width_(width) {
    const int l = static_cast<int>(layer_sizes_.size()) - 1;
    periods_.reserve(2 * l);
    for (int i = 1; i <= l; ++i)
      periods_.push_back({Phase::forward, i, layer_sizes_[i]});
    for (int i = l + 1; i <= 2 * l; ++i)
      periods_.push_back({Phase::backward, 2 * l - i + 1, layer_sizes_[2 * l - i + 1]});
  }

  int l() const { return static_cast<int>(layer_sizes_.size()) - 1; }
  int num_periods() const { return 2 * l(); }
  long long batch_size() const { return batch_size_; }
  long long param_width() const { return param_width_; }

  const Period& period(int i) const {  // i in [1, 2l]
    if (i < 1 || i > num_periods())
      throw ValidationError("period index " + std::to_string(i) + " outside [1, " +
                            std::to_string(num_periods()) + "]");
    return periods_[i - 1];
  }

  long long neuron_count(int i) const { return period(i).neurons; }
  int layer_of(int i) const { return period(i).layer; }

  long long layer_size(int j) const {  // n_j, j in [0, l]
    if (j < 0 || j > l())
      throw ValidationError("layer index " + std::to_string(j) + " outside [0, " + std::to_string(l()) + "]");
    return layer_sizes_[j];
  }

  // n_{j-1} for the layer trained in period i (the fan-in layer).
  long long prev_layer_size_of(int i) const { return layer_size(layer_of(i) - 1); }

  const std::vector<long long>& layer_sizes() const { return layer_sizes_; }

 private:
  std::vector<long long> layer_sizes_;
  long long batch_size_ = 1;
  long long param_width_ = 4;
  std::vector<Period> periods_;
};

inline PeriodSchedule build_period_schedule(const FcnnSpec& fcnn) {
  fcnn.validate();
  return PeriodSchedule(fcnn.layer_sizes, fcnn.batch_size, fcnn.param_width);
}

// Per-period cost constants. alpha/beta are per-neuron work coefficients
// (forward resp. backward), B_i the per-core transmission duration in cycles,
// C the per-core throughput in work units per cycle, zeta fixed per-period
// overheads, d_input the period-0 load duration.
struct WorkloadParams {
  std::vector<Rat> alpha;  // alpha[i-1] = α_i, forward periods i in [1, l]
  std::vector<Rat> beta;   // beta[i-l-1] = β_i, backward periods i in [l+1, 2l]
  std::vector<Rat> B;      // B[i-1] = B_i, i in [1, 2l]
  Rat C = 1;
  std::vector<Rat> zeta;   // zeta[i-1] = ζ_i, i in [1, 2l]
  Rat d_input = 0;

  const Rat& alpha_at(int period) const { return alpha.at(period - 1); }
  const Rat& beta_at(int period) const { return beta.at(period - static_cast<int>(alpha.size()) - 1); }
  const Rat& B_at(int period) const { return B.at(period - 1); }
  const Rat& zeta_at(int period) const { return zeta.at(period - 1); }

  void validate(int l) const {
    auto expect = [](const std::vector<Rat>& v, size_t n, const char* name) {
      if (v.size() != n)
        throw ValidationError(std::string("workload.") + name + ": expected " + std::to_string(n) +
                              " entries, got " + std::to_string(v.size()));
    };
    expect(alpha, static_cast<size_t>(l), "alpha");
    expect(beta, static_cast<size_t>(l), "beta");
    expect(B, static_cast<size_t>(2 * l), "B");
    expect(zeta, static_cast<size_t>(2 * l), "zeta");
    auto nonneg = [](const std::vector<Rat>& v, const char* name) {
      for (size_t k = 0; k < v.size(); ++k)
        if (v[k].is_negative())
          throw ValidationError(std::string("workload.") + name + "[" + std::to_string(k) +
                                "]: must be >= 0");
    };
    nonneg(alpha, "alpha");
    nonneg(beta, "beta");
    nonneg(B, "B");
    nonneg(zeta, "zeta");
    if (C <= Rat(0)) throw ValidationError("workload.C: must be > 0");
    if (d_input.is_negative()) throw ValidationError("workload.d_input: must be >= 0");
  }
};

struct LossParams {
  double il_link_db = 1.0;    // per waveguide link
  double il_router_db = 0.5;  // per traversed router
  double il_eo_db = 1.0;      // electrical-to-optical conversion
  double il_oe_db = 1.0;      // optical-to-electrical conversion
};

// Energy coefficients default to zero: absolute joules are installation
// specific and must be supplied by the user.
struct EnergyParams {
  double static_power_watts = 0.0;
  double dynamic_joules_per_bit = 0.0;
  double joules_per_work_unit = 0.0;
  double joules_per_state_transition = 0.0;
};

// Ring interconnect description. Defaults are illustrative reference values
// for a 3.4 GHz many-core ring with 40 Gb/s per wavelength.
struct OnocConfig {
  int m = 64;           // cores (= routers) on the ring
  int lambda_max = 64;  // wavelengths usable in parallel per TDM slot
  Rat phi = 1;          // fraction of the ring one period may occupy, in (0, 1]
  Rat clock_hz = 3400000000LL;
  Rat bandwidth_per_wavelength = 40000000000LL;  // bits/s
  Rat oe_eo_delay = 1;          // cycles, charged once per transmission
  Rat serialization_delay = 2;  // cycles per flit
  long long flit_bytes = 16;
  LossParams loss;
  EnergyParams energy;

  void validate() const {
    if (m < 1) throw ValidationError("onoc.m: must be >= 1");
    if (lambda_max < 1) throw ValidationError("onoc.lambda_max: must be >= 1");
    if (phi <= Rat(0) || phi > Rat(1)) throw ValidationError("onoc.phi: must be in (0, 1]");
    if (clock_hz <= Rat(0)) throw ValidationError("onoc.clock_hz: must be > 0");
    if (bandwidth_per_wavelength <= Rat(0))
      throw ValidationError("onoc.bandwidth_per_wavelength: must be > 0");
    if (oe_eo_delay.is_negative()) throw ValidationError("onoc.oe_eo_delay: must be >= 0");
    if (serialization_delay.is_negative())
      throw ValidationError("onoc.serialization_delay: must be >= 0");
    if (flit_bytes < 1) throw ValidationError("onoc.flit_bytes: must be >= 1");
  }

  // Largest per-period core count the ring budget allows: floor(phi * m).
  int phi_core_cap() const {
    const long long cap = (phi * Rat(m)).floor_ll();
    return static_cast<int>(cap);
  }
};

// Partial workload overrides; present fields win over derived defaults.
struct WorkloadOverrides {
  std::optional<std::vector<Rat>> alpha;
  std::optional<std::vector<Rat>> beta;
  std::optional<std::vector<Rat>> B;
  std::optional<Rat> C;
  std::optional<std::vector<Rat>> zeta;
  std::optional<Rat> d_input;
};

// Fills WorkloadParams from analytic defaults:
//   α_i = 2·n_{i-1}·μ + μ          (multiply-accumulate over the fan-in, plus activation)
//   β_i = 2·μ
//   B_i = payload_bits/bandwidth · clock + oe_eo_delay + serialization_delay·flits
// where the payload is neurons_per_core_ref neurons of μ samples at
// param_width bytes each. The defaults are calibration aids, not ground
// truth; overrides always win. C defaults to 1 work unit per cycle.
inline WorkloadParams derive_workload(const FcnnSpec& fcnn, const OnocConfig& onoc,
                                      const WorkloadOverrides& overrides = {},
                                      long long neurons_per_core_ref = 1) {
  fcnn.validate();
  onoc.validate();
  if (neurons_per_core_ref < 1)
    throw ValidationError("workload.neurons_per_core_ref: must be >= 1");
  const int l = fcnn.l();
  const Rat mu = fcnn.batch_size;

  WorkloadParams w;
  w.alpha.reserve(l);
  for (int i = 1; i <= l; ++i)
    w.alpha.push_back(Rat(2) * Rat(fcnn.layer_sizes[i - 1]) * mu + mu);
  w.beta.assign(l, Rat(2) * mu);

  const long long payload_bytes = neurons_per_core_ref * fcnn.batch_size * fcnn.param_width;
  const long long flits = ceil_div(payload_bytes, onoc.flit_bytes);
  const Rat b = Rat(8 * payload_bytes) / onoc.bandwidth_per_wavelength * onoc.clock_hz +
                onoc.oe_eo_delay + onoc.serialization_delay * Rat(flits);
  w.B.assign(2 * l, b);
  w.zeta.assign(2 * l, Rat(0));

  if (overrides.alpha) w.alpha = *overrides.alpha;
  if (overrides.beta) w.beta = *overrides.beta;
  if (overrides.B) w.B = *overrides.B;
  if (overrides.C) w.C = *overrides.C;
  if (overrides.zeta) w.zeta = *overrides.zeta;
  if (overrides.d_input) w.d_input = *overrides.d_input;

  w.validate(l);
  return w;
}

}  // namespace onoc
