#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "onocplan/costmodel.hpp"
#include "onocplan/model.hpp"
#include "onocplan/rational.hpp"

namespace onoc {

enum class Strategy { fixed, round_robin, overlapped };

inline const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::fixed: return "fm";
    case Strategy::round_robin: return "rrm";
    case Strategy::overlapped: return "orrm";
  }
  return "?";
}

// Placement of every period's neurons onto ring cores. Core ids are 0-based
// here; reports convert to 1-based. Each period's cores are listed in ring
// order starting at the period's start id; neurons pack onto them in order,
// X_i = ceil(n_i/m_i) per core, so the first ceil(n_i/X_i) cores are used and
// the last of those may hold fewer.
struct Mapping {
  Strategy strategy = Strategy::fixed;
  int total_cores = 0;
  PeriodSchedule schedule;
  CoreAllocation alloc;
  std::vector<std::vector<int>> period_cores;  // [i-1] = cores of period i
  std::vector<int> reuse_counts;               // [i-1] = r_i for i in [1, l]; r_1 = 0
  std::vector<int> start_ids;                  // [i-1] = id_i for i in [1, l], 0-based

  const std::vector<int>& cores_of(int period) const {
    if (period < 1 || period > static_cast<int>(period_cores.size()))
      throw ValidationError("mapping: period index out of range");
    return period_cores[period - 1];
  }

  long long x_of(int period) const {
    return neurons_per_core(period, alloc.at(period), schedule);
  }

  // Core holding the neuron (0-based within its period's layer).
  int core_of(int period, long long neuron) const {
    if (neuron < 0 || neuron >= schedule.neuron_count(period))
      throw ValidationError("mapping: neuron index out of range");
    return cores_of(period)[static_cast<size_t>(neuron / x_of(period))];
  }

  // Neurons the k-th listed core of a period actually holds.
  long long neurons_on_listed_core(int period, size_t pos) const {
    const long long x = x_of(period);
    const long long n = schedule.neuron_count(period);
    const long long used = ceil_div(n, x);
    if (static_cast<long long>(pos) >= used) return 0;
    if (static_cast<long long>(pos) == used - 1) return n - x * (used - 1);
    return x;
  }
};

namespace detail {

inline std::vector<int> ring_block(int start, int count, int m) {
  std::vector<int> v(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) v[static_cast<size_t>(k)] = (start + k) % m;
  return v;
}

inline void mirror_backward_periods(Mapping& mp) {
  const int l = mp.schedule.l();
  for (int i = l + 1; i <= 2 * l; ++i)
    mp.period_cores[i - 1] = mp.period_cores[2 * l - i];  // period 2l-i+1
}

inline Mapping make_base(Strategy s, const CoreAllocation& alloc, const OnocConfig& onoc,
                         const PeriodSchedule& sched) {
  alloc.validate(sched, onoc);
  Mapping mp;
  mp.strategy = s;
  mp.total_cores = onoc.m;
  mp.schedule = sched;
  mp.alloc = alloc;
  mp.period_cores.resize(static_cast<size_t>(sched.num_periods()));
  mp.reuse_counts.assign(static_cast<size_t>(sched.l()), 0);
  mp.start_ids.assign(static_cast<size_t>(sched.l()), 0);
  return mp;
}

}  // namespace detail

// Fixed mapping: every period starts at core 0.
inline Mapping map_fixed(const CoreAllocation& alloc, const OnocConfig& onoc,
                         const PeriodSchedule& sched) {
  Mapping mp = detail::make_base(Strategy::fixed, alloc, onoc, sched);
  for (int i = 1; i <= sched.l(); ++i)
    mp.period_cores[i - 1] = detail::ring_block(0, alloc.at(i), onoc.m);
  detail::mirror_backward_periods(mp);
  return mp;
}

// Round-robin mapping: each forward period starts where the previous one
// ended, wrapping around the ring.
inline Mapping map_round_robin(const CoreAllocation& alloc, const OnocConfig& onoc,
                               const PeriodSchedule& sched) {
  Mapping mp = detail::make_base(Strategy::round_robin, alloc, onoc, sched);
  int start = 0;
  for (int i = 1; i <= sched.l(); ++i) {
    mp.start_ids[i - 1] = start;
    mp.period_cores[i - 1] = detail::ring_block(start, alloc.at(i), onoc.m);
    start = (start + alloc.at(i)) % onoc.m;
  }
  detail::mirror_backward_periods(mp);
  return mp;
}

// Average number of cores adjacent forward periods should share so that one
// round fits the ring: 0 if sum m_i <= m, else (sum - m)/(l - 1).
inline Rat expected_reuse(const CoreAllocation& alloc, int total_cores) {
  const int l = alloc.l();
  long long sum = 0;
  for (int i = 1; i <= l; ++i) sum += alloc.at(i);
  if (sum <= total_cores) return Rat(0);
  if (l == 1)
    throw InfeasibleError("expected_reuse: a single period larger than the ring cannot be overlapped");
  return Rat(sum - total_cores) / Rat(l - 1);
}

// Overlapped round-robin reuse counts:
//   r_1 = 0,  r_i = min(round(E[r]), m_{i-1} - r_{i-1}, m_i)  (round = half up).
inline std::vector<int> reuse_chain(const CoreAllocation& alloc, int total_cores) {
  const int l = alloc.l();
  const long long target = expected_reuse(alloc, total_cores).round_half_up_ll();
  std::vector<int> r(static_cast<size_t>(l), 0);
  for (int i = 2; i <= l; ++i)
    r[i - 1] = static_cast<int>(std::min<long long>(
        {target, alloc.at(i - 1) - r[i - 2], alloc.at(i)}));
  return r;
}

// Overlapped round-robin mapping: period i starts r_i cores before the end
// of period i-1's range, so the last r_i cores of period i-1 double as the
// first r_i cores of period i.
inline Mapping map_overlapped(const CoreAllocation& alloc, const OnocConfig& onoc,
                              const PeriodSchedule& sched) {
  Mapping mp = detail::make_base(Strategy::overlapped, alloc, onoc, sched);
  mp.reuse_counts = reuse_chain(alloc, onoc.m);
  int start = 0;
  for (int i = 1; i <= sched.l(); ++i) {
    if (i > 1) start = (start + alloc.at(i - 1) - mp.reuse_counts[i - 1]) % onoc.m;
    mp.start_ids[i - 1] = start;
    mp.period_cores[i - 1] = detail::ring_block(start, alloc.at(i), onoc.m);
  }
  detail::mirror_backward_periods(mp);
  return mp;
}

inline Mapping build_mapping(Strategy s, const CoreAllocation& alloc, const OnocConfig& onoc,
                             const PeriodSchedule& sched) {
  switch (s) {
    case Strategy::fixed: return map_fixed(alloc, onoc, sched);
    case Strategy::round_robin: return map_round_robin(alloc, onoc, sched);
    case Strategy::overlapped: return map_overlapped(alloc, onoc, sched);
  }
  throw ValidationError("unknown strategy");
}

namespace detail {

// active[core][i] = core participates in period i (1-based periods).
inline std::vector<std::vector<char>> activity(const Mapping& mp) {
  std::vector<std::vector<char>> active(
      static_cast<size_t>(mp.total_cores),
      std::vector<char>(static_cast<size_t>(mp.schedule.num_periods()) + 1, 0));
  for (int i = 1; i <= mp.schedule.num_periods(); ++i)
    for (int c : mp.cores_of(i)) active[static_cast<size_t>(c)][static_cast<size_t>(i)] = 1;
  return active;
}

}  // namespace detail

// Counts on/off toggles over the round: every maximal run of consecutive
// active periods of a core costs one power-on and one power-off.
inline long long simulate_transitions(const Mapping& mp) {
  const auto active = detail::activity(mp);
  long long transitions = 0;
  for (const auto& row : active)
    for (int i = 1; i <= mp.schedule.num_periods(); ++i)
      if (row[static_cast<size_t>(i)] && !row[static_cast<size_t>(i) - 1]) transitions += 2;
  return transitions;
}

// Longest run of consecutive periods any core stays active.
inline int max_consecutive_periods(const Mapping& mp) {
  const auto active = detail::activity(mp);
  int best = 0;
  for (const auto& row : active) {
    int run = 0;
    for (int i = 1; i <= mp.schedule.num_periods(); ++i) {
      run = row[static_cast<size_t>(i)] ? run + 1 : 0;
      best = std::max(best, run);
    }
  }
  return best;
}

// Closed-form transition counts. The round-robin and overlapped forms assume
// adjacent periods share no cores beyond the designed reuse (they hold when
// m_i + m_{i+1} (- r_{i+1}) <= m for all adjacent forward pairs). The
// overlapped r-sum counts every adjacent overlap, forward chain and mirrored
// backward chain, but not the period l -> l+1 handover (that is the m_l term).
inline long long closed_form_transitions(const CoreAllocation& alloc, Strategy s,
                                         int total_cores) {
  const int l = alloc.l();
  long long sum_all = 0;
  for (int i = 1; i <= 2 * l; ++i) sum_all += alloc.at(i);
  switch (s) {
    case Strategy::fixed: {
      long long t = alloc.at(1);
      for (int i = 2; i <= l; ++i) t += std::abs(alloc.at(i) - alloc.at(i - 1));
      return 2 * t;
    }
    case Strategy::round_robin:
      return 2 * (sum_all - alloc.at(l));
    case Strategy::overlapped: {
      const auto r = reuse_chain(alloc, total_cores);
      const long long r_sum = std::accumulate(r.begin(), r.end(), 0LL);
      return 2 * (sum_all - alloc.at(l) - 2 * r_sum);
    }
  }
  throw ValidationError("unknown strategy");
}

namespace detail {

// Hops spanned by the minimal contiguous arc containing the given cores:
// ring size minus the largest empty gap between neighbors.
inline int arc_span_hops(std::vector<int> cores, int m) {
  std::sort(cores.begin(), cores.end());
  cores.erase(std::unique(cores.begin(), cores.end()), cores.end());
  const size_t k = cores.size();
  if (k <= 1) return 0;
  int max_gap = cores.front() + m - cores.back();
  for (size_t j = 0; j + 1 < k; ++j) max_gap = std::max(max_gap, cores[j + 1] - cores[j]);
  return m - max_gap;
}

}  // namespace detail

// Worst transmission path over the round, in hops: for each handover
// (period i to i+1) the signal must sweep, in the phase's travel direction
// (forward clockwise, backward anticlockwise), from the farthest-back sender
// to the farthest-ahead receiver — the minimal arc covering both core sets.
inline int max_path_length(const Mapping& mp) {
  const int l = mp.schedule.l();
  int worst = 0;
  for (int i = 1; i <= mp.schedule.num_periods() - 1; ++i) {
    if (!is_sending_period(i, l)) continue;
    std::vector<int> involved = mp.cores_of(i);
    const auto& rx = mp.cores_of(i + 1);
    involved.insert(involved.end(), rx.begin(), rx.end());
    worst = std::max(worst, detail::arc_span_hops(std::move(involved), mp.total_cores));
  }
  return worst;
}

// Closed-form worst path per strategy:
//   fixed:       max_i (m_i - 1)
//   round-robin: max_{i>=2} (m_i + m_{i-1} - 1)
//   overlapped:  max_{i>=2} (m_i + m_{i-1} - r_i)
// The overlapped form counts one hop more than the simulated arc span; the
// difference is pinned in the tests.
inline long long closed_form_max_path(const CoreAllocation& alloc, Strategy s, int total_cores) {
  const int l = alloc.l();
  long long worst = 0;
  switch (s) {
    case Strategy::fixed:
      for (int i = 1; i <= l; ++i) worst = std::max<long long>(worst, alloc.at(i) - 1);
      return worst;
    case Strategy::round_robin:
      for (int i = 2; i <= l; ++i)
        worst = std::max<long long>(worst, alloc.at(i) + alloc.at(i - 1) - 1);
      return worst;
    case Strategy::overlapped: {
      const auto r = reuse_chain(alloc, total_cores);
      for (int i = 2; i <= l; ++i)
        worst = std::max<long long>(worst, alloc.at(i) + alloc.at(i - 1) - r[i - 1]);
      return worst;
    }
  }
  throw ValidationError("unknown strategy");
}

// Worst-path insertion loss in dB for a path traversing n_routers routers
// (and n_routers - 1 links), plus the conversions at both ends.
inline double insertion_loss_db(int n_routers, const LossParams& loss) {
  if (n_routers < 1) throw ValidationError("insertion_loss: need at least one router");
  return loss.il_link_db * (n_routers - 1) + loss.il_router_db * n_routers + loss.il_eo_db +
         loss.il_oe_db;
}

// Memory one layer-i neuron needs across the round: its fan-in weights,
// gradients and activations (3·n_{i-1}) plus four scalars, for each of the
// mu samples at param_width bytes.
inline long long neuron_memory_bytes(long long prev_layer_size, long long mu, long long psi) {
  if (prev_layer_size < 0 || mu < 1 || psi < 1)
    throw ValidationError("neuron_memory: invalid arguments");
  return (3 * prev_layer_size + 4) * mu * psi;
}

inline long long neuron_memory_bytes(int layer, const FcnnSpec& fcnn) {
  fcnn.validate();
  if (layer < 1 || layer > fcnn.l()) throw ValidationError("neuron_memory: layer outside [1, l]");
  return neuron_memory_bytes(fcnn.layer_sizes[layer - 1], fcnn.batch_size, fcnn.param_width);
}

// Bytes each ring core must hold: every neuron is stored once, on the core
// that handles it in both phases, so only forward periods contribute.
inline std::vector<long long> per_core_memory(const Mapping& mp, const FcnnSpec& fcnn) {
  fcnn.validate();
  std::vector<long long> mem(static_cast<size_t>(mp.total_cores), 0);
  for (int i = 1; i <= mp.schedule.l(); ++i) {
    const long long s = neuron_memory_bytes(mp.schedule.layer_of(i), fcnn);
    const auto& cores = mp.cores_of(i);
    for (size_t pos = 0; pos < cores.size(); ++pos)
      mem[static_cast<size_t>(cores[pos])] += mp.neurons_on_listed_core(i, pos) * s;
  }
  return mem;
}

// Closed-form worst-core memory estimators (exact when every m_i divides n_i
// and, for the overlapped form, every adjacent pair actually shares a core):
//   round-robin: max_i        s_i · n_i/m_i
//   overlapped:  max_{i<l}   (s_i · n_i/m_i + s_{i+1} · n_{i+1}/m_{i+1})
//   fixed:       sum_i        s_i · n_i/m_i
// Only valid when the round fits the ring in one pass; otherwise a core would
// be revisited with different neurons and the forms undercount.
inline Rat closed_form_max_memory(const CoreAllocation& alloc, const FcnnSpec& fcnn, Strategy s,
                                  int total_cores) {
  fcnn.validate();
  const int l = alloc.l();
  long long occupied = 0;
  if (s == Strategy::fixed) {
    for (int i = 1; i <= l; ++i) occupied = std::max<long long>(occupied, alloc.at(i));
  } else if (s == Strategy::round_robin) {
    for (int i = 1; i <= l; ++i) occupied += alloc.at(i);
  } else {
    const auto r = reuse_chain(alloc, total_cores);
    for (int i = 1; i <= l; ++i) occupied += alloc.at(i) - r[i - 1];
  }
  if (occupied > total_cores)
    throw InfeasibleError(
        "max_memory closed form: one training round does not fit the ring in a single pass (" +
        std::to_string(occupied) + " distinct core slots > m = " + std::to_string(total_cores) +
        ")");

  std::vector<Rat> t;  // t[i-1] = s_i · n_i / m_i
  t.reserve(static_cast<size_t>(l));
  for (int i = 1; i <= l; ++i)
    t.push_back(Rat(neuron_memory_bytes(i, fcnn)) * Rat(fcnn.layer_sizes[i]) / Rat(alloc.at(i)));

  switch (s) {
    case Strategy::round_robin:
      return *std::max_element(t.begin(), t.end());
    case Strategy::overlapped: {
      if (l == 1) return t[0];
      Rat worst = t[0] + t[1];
      for (int i = 2; i < l; ++i) worst = std::max(worst, t[i - 1] + t[i]);
      return worst;
    }
    case Strategy::fixed: {
      Rat sum = 0;
      for (const Rat& v : t) sum += v;
      return sum;
    }
  }
  throw ValidationError("unknown strategy");
}

// All static analyses of one mapping in one record.
struct MappingReport {
  Strategy strategy = Strategy::fixed;
  long long transitions_simulated = 0;
  long long transitions_closed_form = 0;
  int max_consecutive_periods = 0;
  int max_path_length = 0;             // simulated arc span, hops
  long long closed_form_max_path = 0;  // strategy formula
  double worst_insertion_loss_db = 0.0;
  std::vector<long long> per_core_memory_bytes;
  long long max_memory_matrix_bytes = 0;
  bool memory_closed_form_valid = false;
  Rat max_memory_closed_form_bytes;  // meaningful only when valid
  std::string memory_note;
};

inline MappingReport analyze_mapping(const Mapping& mp, const FcnnSpec& fcnn,
                                     const OnocConfig& onoc) {
  MappingReport rep;
  rep.strategy = mp.strategy;
  rep.transitions_simulated = simulate_transitions(mp);
  rep.transitions_closed_form = closed_form_transitions(mp.alloc, mp.strategy, mp.total_cores);
  rep.max_consecutive_periods = max_consecutive_periods(mp);
  rep.max_path_length = max_path_length(mp);
  rep.closed_form_max_path = closed_form_max_path(mp.alloc, mp.strategy, mp.total_cores);
  rep.worst_insertion_loss_db = insertion_loss_db(rep.max_path_length + 1, onoc.loss);
  rep.per_core_memory_bytes = per_core_memory(mp, fcnn);
  rep.max_memory_matrix_bytes =
      *std::max_element(rep.per_core_memory_bytes.begin(), rep.per_core_memory_bytes.end());
  try {
    rep.max_memory_closed_form_bytes =
        closed_form_max_memory(mp.alloc, fcnn, mp.strategy, mp.total_cores);
    rep.memory_closed_form_valid = true;
  } catch (const InfeasibleError& e) {
    rep.memory_note = e.what();
  }
  return rep;
}

}  // namespace onoc
