#pragma once

#include <string>
#include <vector>

#include "onocplan/costmodel.hpp"
#include "onocplan/mapping.hpp"
#include "onocplan/model.hpp"
#include "onocplan/rational.hpp"

namespace onoc {

enum class Direction { clockwise, anticlockwise };

inline const char* direction_name(Direction d) {
  return d == Direction::clockwise ? "clockwise" : "anticlockwise";
}

// TDM/WDM schedule of one handover: senders are served in list order in
// batches of lambda_max (one batch per slot); within a slot the k-th sender
// modulates wavelength k. Every transmission is a broadcast filtered by all
// next-period cores, so the receiver set is shared by the whole matrix.
struct WavelengthMatrix {
  int period = 0;
  Direction direction = Direction::clockwise;
  struct Entry {
    int sender;
    int wavelength;  // 1-based
  };
  std::vector<std::vector<Entry>> slots;
  std::vector<int> receivers;
};

inline WavelengthMatrix make_wavelength_matrix(const std::vector<int>& senders,
                                               const std::vector<int>& receivers, int lambda_max,
                                               Direction dir) {
  if (lambda_max < 1) throw ValidationError("wavelength_matrix: lambda_max must be >= 1");
  if (senders.empty()) throw ValidationError("wavelength_matrix: no senders");
  if (receivers.empty()) throw ValidationError("wavelength_matrix: no receivers");
  WavelengthMatrix wm;
  wm.direction = dir;
  wm.receivers = receivers;
  wm.slots.resize(static_cast<size_t>(ceil_div(static_cast<long long>(senders.size()), lambda_max)));
  for (size_t k = 0; k < senders.size(); ++k)
    wm.slots[k / static_cast<size_t>(lambda_max)].push_back(
        {senders[k], static_cast<int>(k % static_cast<size_t>(lambda_max)) + 1});
  return wm;
}

enum class Backend { onoc, enoc };

inline const char* backend_name(Backend b) { return b == Backend::onoc ? "onoc" : "enoc"; }

struct EnergyBreakdown {
  double static_joules = 0.0;
  double dynamic_comm_joules = 0.0;
  double compute_joules = 0.0;
  double transition_joules = 0.0;
  double total() const {
    return static_joules + dynamic_comm_joules + compute_joules + transition_joules;
  }
};

struct PeriodTiming {
  int period = 0;
  Rat compute;
  Rat comm;
  Rat overhead;
  long long slot_count = 0;  // TDM slots (onoc) or unicast messages (enoc)
  std::vector<long long> slot_bits;  // bits carried per slot (onoc only)
  Rat total() const { return compute + comm + overhead; }
};

struct EpochReport {
  Backend backend = Backend::onoc;
  Rat d_input;
  Rat total_time;
  std::vector<PeriodTiming> per_period;
  std::vector<WavelengthMatrix> wavelength_matrices;
  long long transitions = 0;
  long long total_bits = 0;  // payload bits put on the interconnect
  Rat total_work;            // work units executed across all cores
  EnergyBreakdown energy;
};

namespace detail {

inline long long payload_bits_on_core(const Mapping& mp, int period, size_t pos) {
  return mp.neurons_on_listed_core(period, pos) * mp.schedule.batch_size() *
         mp.schedule.param_width() * 8;
}

inline Rat total_work_units(const PeriodSchedule& sched, const WorkloadParams& w) {
  Rat work = 0;
  for (int i = 1; i <= sched.num_periods(); ++i) {
    if (sched.period(i).phase == Phase::forward)
      work += w.alpha_at(i) * Rat(sched.neuron_count(i));
    else
      work += w.beta_at(i) * Rat(sched.neuron_count(i)) * Rat(sched.prev_layer_size_of(i) + 1);
  }
  return work;
}

}  // namespace detail

// Energy split of a finished round. Uses the user-supplied coefficients (all
// default zero): leakage over wall-clock time, joules per transmitted bit,
// per work unit, and per on/off state transition.
inline EnergyBreakdown compute_energy(const EpochReport& rep, const OnocConfig& onoc) {
  EnergyBreakdown e;
  const double seconds = (rep.total_time / onoc.clock_hz).to_double();
  e.static_joules = onoc.energy.static_power_watts * seconds;
  e.dynamic_comm_joules = onoc.energy.dynamic_joules_per_bit * static_cast<double>(rep.total_bits);
  e.compute_joules = onoc.energy.joules_per_work_unit * rep.total_work.to_double();
  e.transition_joules =
      onoc.energy.joules_per_state_transition * static_cast<double>(rep.transitions);
  return e;
}

// Walks one training round over the ring: per-period compute, wavelength
// matrices and slot-counted communication for every handover, state
// transitions and energy. The resulting total_time reproduces epoch_time
// exactly — same exact arithmetic, assembled event by event.
inline EpochReport simulate_epoch(const Mapping& mp, const WorkloadParams& w,
                                  const OnocConfig& onoc,
                                  CommMode mode = CommMode::period_one_sends) {
  const PeriodSchedule& sched = mp.schedule;
  w.validate(sched.l());
  mp.alloc.validate(sched, onoc);

  EpochReport rep;
  rep.backend = Backend::onoc;
  rep.d_input = w.d_input;
  Rat t = w.d_input;
  for (int i = 1; i <= sched.num_periods(); ++i) {
    PeriodTiming pt;
    pt.period = i;
    pt.compute = compute_time(i, mp.alloc.at(i), sched, w);
    pt.overhead = w.zeta_at(i);
    if (is_sending_period(i, sched.l(), mode)) {
      WavelengthMatrix wm = make_wavelength_matrix(
          mp.cores_of(i), mp.cores_of(i + 1), onoc.lambda_max,
          sched.period(i).phase == Phase::forward ? Direction::clockwise
                                                  : Direction::anticlockwise);
      wm.period = i;
      pt.slot_count = static_cast<long long>(wm.slots.size());
      pt.comm = Rat(pt.slot_count) * w.B_at(i);
      size_t pos = 0;
      for (const auto& slot : wm.slots) {
        long long bits = 0;
        for (size_t k = 0; k < slot.size(); ++k, ++pos)
          bits += detail::payload_bits_on_core(mp, i, pos);
        pt.slot_bits.push_back(bits);
        rep.total_bits += bits;
      }
      rep.wavelength_matrices.push_back(std::move(wm));
    }
    t += pt.total();
    rep.per_period.push_back(std::move(pt));
  }
  rep.total_time = t;
  rep.transitions = simulate_transitions(mp);
  rep.total_work = detail::total_work_units(sched, w);
  rep.energy = compute_energy(rep, onoc);
  return rep;
}

// Electrical ring baseline parameters.
struct EnocParams {
  Rat hop_latency = 2;      // cycles per hop
  long long flit_bytes = 16;
  long long packet_bytes = 64;
  Rat serialization = 2;    // cycles per flit

  void validate() const {
    if (hop_latency.is_negative()) throw ValidationError("enoc.hop_latency: must be >= 0");
    if (flit_bytes < 1) throw ValidationError("enoc.flit_bytes: must be >= 1");
    if (packet_bytes < flit_bytes)
      throw ValidationError("enoc.packet_bytes: must be >= flit_bytes");
    if (serialization.is_negative()) throw ValidationError("enoc.serialization: must be >= 0");
  }
};

inline int ring_hops(int from, int to, int m) {
  const int fwd = ((to - from) % m + m) % m;
  return std::min(fwd, m - fwd);
}

// Electrical-ring baseline round: identical compute, but every handover is a
// repeated unicast — each sender transmits its payload to every receiver over
// the shortest ring path, one message at a time (conservative no-overlap
// contention model). Payloads ride in packet_bytes-sized packets (the tail
// packet padded), so per message: hops·hop_latency + flits·serialization with
// flits = packets · packet_bytes/flit_bytes. Self-messages (sender also holds
// the data's destination) cost nothing and cores with no neurons send
// nothing. Energy is left zeroed; apply compute_energy with the coefficient
// set of your choice.
inline EpochReport simulate_enoc_epoch(const Mapping& mp, const WorkloadParams& w,
                                       const EnocParams& ep,
                                       CommMode mode = CommMode::period_one_sends) {
  const PeriodSchedule& sched = mp.schedule;
  w.validate(sched.l());
  ep.validate();

  EpochReport rep;
  rep.backend = Backend::enoc;
  rep.d_input = w.d_input;
  Rat t = w.d_input;
  for (int i = 1; i <= sched.num_periods(); ++i) {
    PeriodTiming pt;
    pt.period = i;
    pt.compute = compute_time(i, mp.alloc.at(i), sched, w);
    pt.overhead = w.zeta_at(i);
    if (is_sending_period(i, sched.l(), mode)) {
      const auto& senders = mp.cores_of(i);
      const auto& receivers = mp.cores_of(i + 1);
      for (size_t pos = 0; pos < senders.size(); ++pos) {
        const long long payload_bytes =
            mp.neurons_on_listed_core(i, pos) * sched.batch_size() * sched.param_width();
        if (payload_bytes == 0) continue;
        const long long flits =
            ceil_div(payload_bytes, ep.packet_bytes) * ceil_div(ep.packet_bytes, ep.flit_bytes);
        for (int r : receivers) {
          if (r == senders[pos]) continue;
          pt.comm += Rat(ring_hops(senders[pos], r, mp.total_cores)) * ep.hop_latency +
                     Rat(flits) * ep.serialization;
          rep.total_bits += payload_bytes * 8;
          ++pt.slot_count;
        }
      }
    }
    t += pt.total();
    rep.per_period.push_back(std::move(pt));
  }
  rep.total_time = t;
  rep.transitions = simulate_transitions(mp);
  rep.total_work = detail::total_work_units(sched, w);
  return rep;
}

}  // namespace onoc
