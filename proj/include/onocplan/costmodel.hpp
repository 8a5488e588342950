#pragma once

#include <string>
#include <vector>

#include "onocplan/model.hpp"
#include "onocplan/rational.hpp"

namespace onoc {

// Which periods transmit to their successor. In the default mode the sending
// periods are [1, l-1] and [l+1, 2l-1]: period l hands over to the backward
// pass on the same cores and period 2l ends the round, so neither transmits,
// while period 1 does. period_one_silent additionally silences period 1
// (zero-communication set {1, l, 2l}); it exists for sensitivity studies.
enum class CommMode { period_one_sends, period_one_silent };

inline bool is_sending_period(int i, int l, CommMode mode = CommMode::period_one_sends) {
  if (i == l || i == 2 * l) return false;
  if (i == 1 && mode == CommMode::period_one_silent) return false;
  return i >= 1 && i < 2 * l;
}

// Cores allocated per period. Mirrored by construction: period 2l-i+1 uses
// the same count (and later the same cores) as period i, since the backward
// pass of a layer reuses the neurons' forward placement.
class CoreAllocation {
 public:
  CoreAllocation() = default;

  explicit CoreAllocation(std::vector<int> per_period) : m_(std::move(per_period)) {
    if (m_.empty() || m_.size() % 2 != 0)
      throw ValidationError("allocation: need one entry per period (even count)");
    const int l = static_cast<int>(m_.size()) / 2;
    for (size_t k = 0; k < m_.size(); ++k)
      if (m_[k] < 1)
        throw ValidationError("allocation: period " + std::to_string(k + 1) +
                              " must have >= 1 cores");
    for (int i = 1; i <= l; ++i)
      if (m_[i - 1] != m_[2 * l - i])
        throw ValidationError("allocation: period " + std::to_string(2 * l - i + 1) +
                              " must mirror period " + std::to_string(i));
  }

  static CoreAllocation from_fp(const std::vector<int>& fp_half) {
    if (fp_half.empty()) throw ValidationError("allocation: empty");
    std::vector<int> full(fp_half);
    full.insert(full.end(), fp_half.rbegin(), fp_half.rend());
    return CoreAllocation(std::move(full));
  }

  int at(int period) const {  // 1-based
    if (period < 1 || period > static_cast<int>(m_.size()))
      throw ValidationError("allocation: period index out of range");
    return m_[period - 1];
  }
  int l() const { return static_cast<int>(m_.size()) / 2; }
  int num_periods() const { return static_cast<int>(m_.size()); }
  const std::vector<int>& values() const { return m_; }
  std::vector<int> fp_half() const { return {m_.begin(), m_.begin() + l()}; }

  void validate(const PeriodSchedule& sched, const OnocConfig& onoc) const {
    if (num_periods() != sched.num_periods())
      throw ValidationError("allocation: expected " + std::to_string(sched.num_periods()) +
                            " periods, got " + std::to_string(num_periods()));
    const int cap = onoc.phi_core_cap();
    if (cap < 1)
      throw ValidationError("onoc.phi: floor(phi*m) < 1, no period can be allocated any cores");
    for (int i = 1; i <= num_periods(); ++i) {
      if (at(i) < 1)
        throw ValidationError("allocation: period " + std::to_string(i) + " must have >= 1 cores");
      if (at(i) > cap)
        throw ValidationError("allocation: period " + std::to_string(i) + " uses " +
                              std::to_string(at(i)) + " cores, above the ring budget floor(phi*m) = " +
                              std::to_string(cap));
      if (at(i) > sched.neuron_count(i))
        throw ValidationError("allocation: period " + std::to_string(i) + " uses " +
                              std::to_string(at(i)) + " cores for " +
                              std::to_string(sched.neuron_count(i)) + " neurons");
    }
  }

 private:
  std::vector<int> m_;
};

// X_i: neurons each core must handle when period i's neurons are spread over
// m_i cores.
inline long long neurons_per_core(int period, int m_i, const PeriodSchedule& sched) {
  if (m_i < 1) throw ValidationError("neurons_per_core: core count must be >= 1");
  return ceil_div(sched.neuron_count(period), m_i);
}

// Computation duration of one period. Forward: α_i·X_i/C. Backward:
// β_i·X_i·(n_{j-1}+1)/C where j is the layer trained in period i (each
// neuron propagates gradients across its fan-in plus bias).
inline Rat compute_time(int period, int m_i, const PeriodSchedule& sched,
                        const WorkloadParams& w) {
  const Rat x = neurons_per_core(period, m_i, sched);
  if (sched.period(period).phase == Phase::forward)
    return w.alpha_at(period) * x / w.C;
  return w.beta_at(period) * x * Rat(sched.prev_layer_size_of(period) + 1) / w.C;
}

// Communication duration of one period: sending periods pay one B_i per TDM
// slot, with ceil(m_i/lambda_max) slots; non-sending periods cost zero.
inline Rat comm_time(int period, int m_i, const PeriodSchedule& sched, const WorkloadParams& w,
                     int lambda_max, CommMode mode = CommMode::period_one_sends) {
  if (m_i < 1) throw ValidationError("comm_time: core count must be >= 1");
  if (lambda_max < 1) throw ValidationError("comm_time: lambda_max must be >= 1");
  if (!is_sending_period(period, sched.l(), mode)) return Rat(0);
  return Rat(ceil_div(m_i, lambda_max)) * w.B_at(period);
}

struct PeriodCost {
  Rat compute;
  Rat comm;
  Rat overhead;
  Rat total() const { return compute + comm + overhead; }
};

inline std::vector<PeriodCost> per_period_costs(const CoreAllocation& alloc,
                                                const PeriodSchedule& sched,
                                                const WorkloadParams& w, int lambda_max,
                                                CommMode mode = CommMode::period_one_sends) {
  std::vector<PeriodCost> costs;
  costs.reserve(sched.num_periods());
  for (int i = 1; i <= sched.num_periods(); ++i)
    costs.push_back({compute_time(i, alloc.at(i), sched, w),
                     comm_time(i, alloc.at(i), sched, w, lambda_max, mode), w.zeta_at(i)});
  return costs;
}

// Total duration of one training round:
//   T = d_input + sum over periods of (compute + comm + zeta).
inline Rat epoch_time(const CoreAllocation& alloc, const PeriodSchedule& sched,
                      const WorkloadParams& w, const OnocConfig& onoc,
                      CommMode mode = CommMode::period_one_sends) {
  w.validate(sched.l());
  alloc.validate(sched, onoc);
  Rat t = w.d_input;
  for (const PeriodCost& c : per_period_costs(alloc, sched, w, onoc.lambda_max, mode))
    t += c.total();
  return t;
}

// Cost of the mirrored period pair (i, 2l-i+1) as a function of their shared
// core count. T is separable: T = d_input + sum zeta + sum_i pair_cost(i).
inline Rat pair_cost(int i, int m_i, const PeriodSchedule& sched, const WorkloadParams& w,
                     int lambda_max, CommMode mode = CommMode::period_one_sends) {
  const int mirror = 2 * sched.l() - i + 1;
  return compute_time(i, m_i, sched, w) + compute_time(mirror, m_i, sched, w) +
         comm_time(i, m_i, sched, w, lambda_max, mode) +
         comm_time(mirror, m_i, sched, w, lambda_max, mode);
}

}  // namespace onoc
