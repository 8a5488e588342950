#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "onocplan/costmodel.hpp"
#include "onocplan/model.hpp"
#include "onocplan/rational.hpp"

namespace onoc {

enum class Method { closed_form, brute_force };

inline const char* method_name(Method m) {
  return m == Method::closed_form ? "closed" : "brute";
}

// Spelled-out form for report payloads; the short form is the flag token.
inline const char* method_long_name(Method m) {
  return m == Method::closed_form ? "closed_form" : "brute_force";
}

enum class ClampReason { phi_m, neuron_count };

struct Clamp {
  int period;  // forward period index in [1, l]; the mirror clamps with it
  ClampReason reason;
};

struct OptimizationResult {
  CoreAllocation allocation;
  Rat epoch_time;
  std::vector<PeriodCost> per_period;
  Method method = Method::closed_form;
  std::vector<Clamp> clamps;  // brute force records none
};

// θ_i = n_i · λ_max · (β_{2l-i+1}·(n_{i-1}+1) + α_i): the work-side constant
// of the mirrored period pair i that trades against its communication slope.
inline Rat theta(int i, const PeriodSchedule& sched, const WorkloadParams& w, int lambda_max) {
  const int l = sched.l();
  if (i < 1 || i > l) throw ValidationError("theta: forward period index outside [1, l]");
  const int mirror = 2 * l - i + 1;
  return Rat(sched.layer_size(i)) * Rat(lambda_max) *
         (w.beta_at(mirror) * Rat(sched.layer_size(i - 1) + 1) + w.alpha_at(i));
}

// Smallest integer k >= 0 with k*k >= q. Double-seeded, fixed up exactly.
inline long long ceil_sqrt(const Rat& q) {
  if (q <= Rat(0)) return 0;
  auto k = static_cast<long long>(std::sqrt(q.to_double()));
  if (k < 0) k = 0;
  while (k > 0 && Rat(k - 1) * Rat(k - 1) >= q) --k;
  while (Rat(k) * Rat(k) < q) ++k;
  return k;
}

// B-sum that multiplies the slot count in pair i's communication term: the
// forward member transmits for i < l, the backward member (period 2l-i+1)
// for i > 1. For i = 1 only B_1 remains; this branch is also used when
// l = 1, where the pair has no communication at all but the candidate formula
// keeps the B_1 denominator.
inline Rat pair_comm_denominator(int i, const PeriodSchedule& sched, const WorkloadParams& w) {
  const int l = sched.l();
  if (i == 1) return w.B_at(1);
  if (i == l) return w.B_at(l + 1);
  return w.B_at(i) + w.B_at(2 * l - i + 1);
}

// Closed-form per-pair core counts:
//   m*_i = clamp(ceil(sqrt(θ_i / (denom_i · C))), 1, min(floor(phi·m), n_i)).
// Zero θ floors to one core. When both caps could bind, the recorded reason
// is the cap the result actually sits on, preferring neuron_count on ties.
inline OptimizationResult closed_form_allocation(const PeriodSchedule& sched,
                                                 const WorkloadParams& w, const OnocConfig& onoc,
                                                 CommMode mode = CommMode::period_one_sends) {
  w.validate(sched.l());
  onoc.validate();
  const int cap_phi = onoc.phi_core_cap();
  if (cap_phi < 1)
    throw ValidationError("onoc.phi: floor(phi*m) < 1, no period can be allocated any cores");

  const int l = sched.l();
  OptimizationResult res;
  res.method = Method::closed_form;
  std::vector<int> fp(l, 1);
  for (int i = 1; i <= l; ++i) {
    const Rat th = theta(i, sched, w, onoc.lambda_max);
    const Rat denom = pair_comm_denominator(i, sched, w) * w.C;
    const long long n_i = sched.layer_size(i);
    const long long cap = std::min<long long>(cap_phi, n_i);
    long long candidate;
    if (denom.is_zero())
      candidate = th.is_zero() ? 1 : std::numeric_limits<long long>::max();
    else
      candidate = ceil_sqrt(th / denom);
    long long m_i = candidate;
    if (m_i > cap) {
      res.clamps.push_back({i, n_i <= cap_phi ? ClampReason::neuron_count : ClampReason::phi_m});
      m_i = cap;
    }
    if (m_i < 1) m_i = 1;
    fp[i - 1] = static_cast<int>(m_i);
  }
  res.allocation = CoreAllocation::from_fp(fp);
  res.per_period = per_period_costs(res.allocation, sched, w, onoc.lambda_max, mode);
  res.epoch_time = epoch_time(res.allocation, sched, w, onoc, mode);
  return res;
}

// Exhaustive oracle: minimizes each pair_cost over its full feasible range
// [1, min(floor(phi·m), n_i)] with exact arithmetic, ties toward the smaller
// core count. Separability makes the per-pair scans jointly optimal.
inline OptimizationResult brute_force_allocation(const PeriodSchedule& sched,
                                                 const WorkloadParams& w, const OnocConfig& onoc,
                                                 CommMode mode = CommMode::period_one_sends) {
  w.validate(sched.l());
  onoc.validate();
  const int cap_phi = onoc.phi_core_cap();
  if (cap_phi < 1)
    throw ValidationError("onoc.phi: floor(phi*m) < 1, no period can be allocated any cores");

  const int l = sched.l();
  std::vector<int> fp(l, 1);
  for (int i = 1; i <= l; ++i) {
    const long long cap = std::min<long long>(cap_phi, sched.layer_size(i));
    int best_m = 1;
    Rat best = pair_cost(i, 1, sched, w, onoc.lambda_max, mode);
    for (int m_i = 2; m_i <= cap; ++m_i) {
      const Rat h = pair_cost(i, m_i, sched, w, onoc.lambda_max, mode);
      if (h < best) {
        best = h;
        best_m = m_i;
      }
    }
    fp[i - 1] = best_m;
  }
  OptimizationResult res;
  res.method = Method::brute_force;
  res.allocation = CoreAllocation::from_fp(fp);
  res.per_period = per_period_costs(res.allocation, sched, w, onoc.lambda_max, mode);
  res.epoch_time = epoch_time(res.allocation, sched, w, onoc, mode);
  return res;
}

// How far the closed form sits from the exhaustive optimum.
struct AllocationGap {
  double core_error_pct;  // mean over pairs of |m_closed - m_brute| / m_brute, in percent
  double time_diff_pct;   // (T_closed - T_brute) / T_brute, in percent
};

inline AllocationGap gap_between(const OptimizationResult& closed,
                                 const OptimizationResult& brute) {
  const int l = closed.allocation.l();
  double err = 0.0;
  for (int i = 1; i <= l; ++i)
    err += std::abs(closed.allocation.at(i) - brute.allocation.at(i)) /
           static_cast<double>(brute.allocation.at(i));
  const double t_b = brute.epoch_time.to_double();
  return {100.0 * err / l, 100.0 * (closed.epoch_time - brute.epoch_time).to_double() / t_b};
}

inline AllocationGap allocation_gap(const PeriodSchedule& sched, const WorkloadParams& w,
                                    const OnocConfig& onoc,
                                    CommMode mode = CommMode::period_one_sends) {
  return gap_between(closed_form_allocation(sched, w, onoc, mode),
                     brute_force_allocation(sched, w, onoc, mode));
}

}  // namespace onoc
