#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "onocplan/config.hpp"

namespace onoc {

struct ResolvedModel {
  PeriodSchedule schedule;
  WorkloadParams workload;
};

inline ResolvedModel resolve_model(const RunConfig& c) {
  return {build_period_schedule(c.fcnn),
          derive_workload(c.fcnn, c.onoc, c.overrides, c.neurons_per_core_ref)};
}

// Finest-grained baseline: one neuron per core, capped by the ring budget.
inline CoreAllocation fgp_allocation(const PeriodSchedule& sched, const OnocConfig& onoc) {
  const long long cap = onoc.phi_core_cap();
  std::vector<int> fp(static_cast<size_t>(sched.l()));
  for (int i = 1; i <= sched.l(); ++i)
    fp[i - 1] = static_cast<int>(std::min<long long>(sched.layer_size(i), cap));
  return CoreAllocation::from_fp(fp);
}

// Fixed-count baseline: the same core count for every period, clamped to stay
// feasible per period.
inline CoreAllocation fnp_allocation(const PeriodSchedule& sched, const OnocConfig& onoc,
                                     int cores) {
  if (cores < 1) throw ValidationError("run.fnp_cores: must be >= 1");
  const long long cap = onoc.phi_core_cap();
  std::vector<int> fp(static_cast<size_t>(sched.l()));
  for (int i = 1; i <= sched.l(); ++i)
    fp[i - 1] = static_cast<int>(std::min<long long>({static_cast<long long>(cores), sched.layer_size(i), cap}));
  return CoreAllocation::from_fp(fp);
}

// Explicit allocation from the config when present, else the chosen method.
inline CoreAllocation select_allocation(const RunConfig& c, const ResolvedModel& m) {
  if (c.run.allocation) {
    CoreAllocation a = CoreAllocation::from_fp(*c.run.allocation);
    a.validate(m.schedule, c.onoc);
    return a;
  }
  return c.run.method == Method::brute_force
             ? brute_force_allocation(m.schedule, m.workload, c.onoc).allocation
             : closed_form_allocation(m.schedule, m.workload, c.onoc).allocation;
}

namespace rpt {

constexpr int kSchemaVersion = 1;

// Shortest round-trip rendering, same as the JSON output.
inline std::string num(double v) { return json(v).dump(); }

inline json period_costs_json(const std::vector<PeriodCost>& costs) {
  json a = json::array();
  for (size_t k = 0; k < costs.size(); ++k)
    a.push_back({{"period", k + 1},
                 {"compute_cycles", costs[k].compute.to_double()},
                 {"comm_cycles", costs[k].comm.to_double()},
                 {"overhead_cycles", costs[k].overhead.to_double()}});
  return a;
}

inline json optimization_json(const OptimizationResult& r) {
  json clamps = json::array();
  for (const Clamp& c : r.clamps)
    clamps.push_back({{"period", c.period},
                      {"reason", c.reason == ClampReason::phi_m ? "phi_m" : "neuron_count"}});
  return {{"method", method_long_name(r.method)},
          {"allocation_fp", r.allocation.fp_half()},
          {"epoch_time_cycles", r.epoch_time.to_double()},
          {"epoch_time_exact", r.epoch_time.str()},
          {"clamps", clamps},
          {"per_period", period_costs_json(r.per_period)}};
}

// 1-based core ids in everything user-facing.
inline json core_list_json(const std::vector<int>& cores) {
  json a = json::array();
  for (int c : cores) a.push_back(c + 1);
  return a;
}

inline json mapping_json(const Mapping& mp) {
  json periods = json::array();
  for (int i = 1; i <= mp.schedule.num_periods(); ++i) periods.push_back(core_list_json(mp.cores_of(i)));
  json starts = json::array();
  for (int s : mp.start_ids) starts.push_back(s + 1);
  return {{"strategy", strategy_name(mp.strategy)},
          {"total_cores", mp.total_cores},
          {"allocation_fp", mp.alloc.fp_half()},
          {"starts", starts},
          {"reuse", mp.reuse_counts},
          {"period_cores", periods}};
}

inline json assignment_json(const Mapping& mp) {
  json a = json::array();
  for (int i = 1; i <= mp.schedule.l(); ++i)
    for (long long nrn = 0; nrn < mp.schedule.neuron_count(i); ++nrn)
      a.push_back({i, nrn + 1, mp.core_of(i, nrn) + 1});
  return a;
}

inline std::string assignment_csv(const Mapping& mp) {
  std::ostringstream os;
  os << "period,neuron,core\n";
  for (int i = 1; i <= mp.schedule.l(); ++i)
    for (long long nrn = 0; nrn < mp.schedule.neuron_count(i); ++nrn)
      os << i << ',' << nrn + 1 << ',' << mp.core_of(i, nrn) + 1 << '\n';
  return os.str();
}

inline json mapping_report_json(const MappingReport& r) {
  json j = {{"transitions_simulated", r.transitions_simulated},
            {"transitions_closed_form", r.transitions_closed_form},
            {"max_consecutive_periods", r.max_consecutive_periods},
            {"max_path_length", r.max_path_length},
            {"closed_form_max_path", r.closed_form_max_path},
            {"worst_insertion_loss_db", r.worst_insertion_loss_db},
            {"per_core_memory_bytes", r.per_core_memory_bytes},
            {"max_memory_matrix_bytes", r.max_memory_matrix_bytes}};
  if (r.memory_closed_form_valid) {
    j["max_memory_closed_form_bytes"] = r.max_memory_closed_form_bytes.to_double();
    j["max_memory_closed_form_exact"] = r.max_memory_closed_form_bytes.str();
  } else {
    j["max_memory_closed_form_bytes"] = nullptr;
    j["memory_note"] = r.memory_note;
  }
  return j;
}

inline json wavelength_matrix_json(const WavelengthMatrix& wm) {
  json
      slots = json::array();
  for (const auto& slot : wm.slots) {
    json s = json::array();
    for (const auto& e : slot) s.push_back({{"sender", e.sender + 1}, {"wavelength", e.wavelength}});
    slots.push_back(s);
  }
  return {{"period", wm.period},
          {"direction", direction_name(wm.direction)},
          {"receivers", core_list_json(wm.receivers)},
          {"slots", slots}};
}

inline std::string wavelength_csv(const EpochReport& rep) {
  std::ostringstream os;
  os << "period,slot,sender,wavelength,receivers\n";
  for (const WavelengthMatrix& wm : rep.wavelength_matrices) {
    std::string rx;
    for (size_t k = 0; k < wm.receivers.size(); ++k) {
      if (k) rx += ';';
      rx += std::to_string(wm.receivers[k] + 1);
    }
    for (size_t s = 0; s < wm.slots.size(); ++s)
      for (const auto& e : wm.slots[s])
        os << wm.period << ',' << s + 1 << ',' << e.sender + 1 << ',' << e.wavelength << ','
           << rx << '\n';
  }
  return os.str();
}

inline json energy_json(const EnergyBreakdown& e) {
  return {{"static_joules", e.static_joules},
          {"dynamic_comm_joules", e.dynamic_comm_joules},
          {"compute_joules", e.compute_joules},
          {"transition_joules", e.transition_joules},
          {"total_joules", e.total()}};
}

inline json epoch_report_json(const EpochReport& rep, const PeriodSchedule& sched) {
  json per = json::array();
  for (const PeriodTiming& pt : rep.per_period)
    per.push_back({{"period", pt.period},
                   {"phase", phase_name(sched.period(pt.period).phase)},
                   {"layer", sched.layer_of(pt.period)},
                   {"compute_cycles", pt.compute.to_double()},
                   {"comm_cycles", pt.comm.to_double()},
                   {"overhead_cycles", pt.overhead.to_double()},
                   {"slots", pt.slot_count},
                   {"slot_bits", pt.slot_bits}});
  json wms = json::array();
  for (const WavelengthMatrix& wm : rep.wavelength_matrices)
    wms.push_back(wavelength_matrix_json(wm));
  return {{"backend", backend_name(rep.backend)},
          {"d_input_cycles", rep.d_input.to_double()},
          {"total_time_cycles", rep.total_time.to_double()},
          {"total_time_exact", rep.total_time.str()},
          {"per_period", per},
          {"transitions", rep.transitions},
          {"total_bits", rep.total_bits},
          {"total_work_units", rep.total_work.to_double()},
          {"energy", energy_json(rep.energy)},
          {"wavelength_matrices", wms}};
}

}  // namespace rpt

// ---- plan ----

inline json plan_report(const RunConfig& c) {
  const ResolvedModel m = resolve_model(c);
  const OptimizationResult closed = closed_form_allocation(m.schedule, m.workload, c.onoc);
  const OptimizationResult brute = brute_force_allocation(m.schedule, m.workload, c.onoc);
  const AllocationGap gap = gap_between(closed, brute);

  const CoreAllocation ones = CoreAllocation::from_fp(std::vector<int>(m.schedule.l(), 1));
  const Rat t_ones = epoch_time(ones, m.schedule, m.workload, c.onoc);

  return {{"schema_version", rpt::kSchemaVersion},
          {"command", "plan"},
          {"closed", rpt::optimization_json(closed)},
          {"brute", rpt::optimization_json(brute)},
          {"gap", {{"core_error_pct", gap.core_error_pct}, {"time_diff_pct", gap.time_diff_pct}}},
          {"baseline_all_ones",
           {{"allocation_fp", ones.fp_half()},
            {"epoch_time_cycles", t_ones.to_double()},
            {"epoch_time_exact", t_ones.str()}}},
          {"config", config_echo(c)}};
}

// ---- map ----

inline json map_report(const RunConfig& c) {
  const ResolvedModel m = resolve_model(c);
  const CoreAllocation alloc = select_allocation(c, m);
  const Mapping mp = build_mapping(c.run.strategy, alloc, c.onoc, m.schedule);
  const MappingReport rep = analyze_mapping(mp, c.fcnn, c.onoc);
  json j = rpt::mapping_json(mp);
  j["schema_version"] = rpt::kSchemaVersion;
  j["command"] = "map";
  j["assignment"] = rpt::assignment_json(mp);
  j["report"] = rpt::mapping_report_json(rep);
  j["config"] = config_echo(c);
  return j;
}

inline std::string map_csv(const RunConfig& c) {
  const ResolvedModel m = resolve_model(c);
  const CoreAllocation alloc = select_allocation(c, m);
  return rpt::assignment_csv(build_mapping(c.run.strategy, alloc, c.onoc, m.schedule));
}

// ---- simulate ----

inline EpochReport run_simulation(const RunConfig& c, const ResolvedModel& m) {
  const CoreAllocation alloc = select_allocation(c, m);
  const Mapping mp = build_mapping(c.run.strategy, alloc, c.onoc, m.schedule);
  if (c.run.backend == Backend::onoc) return simulate_epoch(mp, m.workload, c.onoc);
  EpochReport rep = simulate_enoc_epoch(mp, m.workload, c.enoc);
  rep.energy = compute_energy(rep, c.onoc);
  return rep;
}

inline json simulate_report(const RunConfig& c) {
  const ResolvedModel m = resolve_model(c);
  const EpochReport rep = run_simulation(c, m);
  json j = rpt::epoch_report_json(rep, m.schedule);
  j["schema_version"] = rpt::kSchemaVersion;
  j["command"] = "simulate";
  j["strategy"] = strategy_name(c.run.strategy);
  j["config"] = config_echo(c);
  return j;
}

inline std::string simulate_csv(const RunConfig& c) {
  const ResolvedModel m = resolve_model(c);
  return rpt::wavelength_csv(run_simulation(c, m));
}

// ---- compare ----

struct CompareRow {
  std::string label;
  Backend backend = Backend::onoc;
  CoreAllocation alloc;
  Rat total_time;
  long long transitions = 0;
  double energy_joules = 0.0;
};

inline std::vector<CompareRow> compare_rows(const RunConfig& c) {
  const ResolvedModel m = resolve_model(c);
  const CoreAllocation optimal =
      c.run.method == Method::brute_force
          ? brute_force_allocation(m.schedule, m.workload, c.onoc).allocation
          : closed_form_allocation(m.schedule, m.workload, c.onoc).allocation;
  const std::vector<std::pair<std::string, CoreAllocation>> allocs = {
      {"optimal", optimal},
      {"fgp", fgp_allocation(m.schedule, c.onoc)},
      {"fnp", fnp_allocation(m.schedule, c.onoc, c.run.fnp_cores)}};

  std::vector<CompareRow> rows;
  for (const auto& [label, alloc] : allocs) {
    const Mapping mp = build_mapping(c.run.strategy, alloc, c.onoc, m.schedule);
    for (Backend b : {Backend::onoc, Backend::enoc}) {
      EpochReport rep;
      if (b == Backend::onoc) {
        rep = simulate_epoch(mp, m.workload, c.onoc);
      } else {
        rep = simulate_enoc_epoch(mp, m.workload, c.enoc);
        rep.energy = compute_energy(rep, c.onoc);
      }
      rows.push_back({label, b, alloc, rep.total_time, rep.transitions, rep.energy.total()});
    }
  }
  return rows;
}

inline json compare_report(const RunConfig& c) {
  json rows = json::array();
  for (const CompareRow& r : compare_rows(c))
    rows.push_back({{"allocation", r.label},
                    {"backend", backend_name(r.backend)},
                    {"allocation_fp", r.alloc.fp_half()},
                    {"total_time_cycles", r.total_time.to_double()},
                    {"total_time_exact", r.total_time.str()},
                    {"transitions", r.transitions},
                    {"energy_total_joules", r.energy_joules}});
  return {{"schema_version", rpt::kSchemaVersion},
          {"command", "compare"},
          {"strategy", strategy_name(c.run.strategy)},
          {"rows", rows},
          {"config", config_echo(c)}};
}

inline std::string compare_csv(const RunConfig& c) {
  std::ostringstream os;
  os << "allocation,backend,total_time_cycles,transitions,energy_total_joules\n";
  for (const CompareRow& r : compare_rows(c))
    os << r.label << ',' << backend_name(r.backend) << ',' << rpt::num(r.total_time.to_double())
       << ',' << r.transitions << ',' << rpt::num(r.energy_joules) << '\n';
  return os.str();
}

// ---- sweep ----

struct SweepRow {
  int cores = 0;
  Rat compute;
  Rat comm;
  Rat total;
};

// Single-period mode charts the mirrored pair's cost as its core count
// varies (the per-layer trade-off curve); the caps are deliberately not
// applied so the whole curve is visible. Uniform mode gives every period the
// swept count (clamped per period to stay feasible) and reports whole-round
// sums.
inline std::vector<SweepRow> sweep_rows(const RunConfig& c) {
  const ResolvedModel m = resolve_model(c);
  const SweepSpec sw = c.run.sweep ? *c.run.sweep : SweepSpec{};
  if (sw.from < 1 || sw.to < sw.from || sw.step < 1)
    throw ValidationError("run.sweep: need 1 <= from <= to and step >= 1");
  if (sw.period && (*sw.period < 1 || *sw.period > m.schedule.l()))
    throw ValidationError("run.sweep.period: must be a forward period in [1, " +
                          std::to_string(m.schedule.l()) + "]");
  std::vector<SweepRow> rows;
  for (int v = sw.from; v <= sw.to; v += sw.step) {
    SweepRow row;
    row.cores = v;
    if (sw.period) {
      const int i = *sw.period;
      const int mirror = 2 * m.schedule.l() - i + 1;
      row.compute = compute_time(i, v, m.schedule, m.workload) +
                    compute_time(mirror, v, m.schedule, m.workload);
      row.comm = comm_time(i, v, m.schedule, m.workload, c.onoc.lambda_max) +
                 comm_time(mirror, v, m.schedule, m.workload, c.onoc.lambda_max);
      row.total = row.compute + row.comm;
    } else {
      const long long cap = c.onoc.phi_core_cap();
      std::vector<int> fp(static_cast<size_t>(m.schedule.l()));
      for (int i = 1; i <= m.schedule.l(); ++i)
        fp[i - 1] = static_cast<int>(
            std::min<long long>({static_cast<long long>(v), m.schedule.layer_size(i), cap}));
      const CoreAllocation alloc = CoreAllocation::from_fp(fp);
      for (const PeriodCost& pc : per_period_costs(alloc, m.schedule, m.workload, c.onoc.lambda_max)) {
        row.compute += pc.compute;
        row.comm += pc.comm;
      }
      row.total = epoch_time(alloc, m.schedule, m.workload, c.onoc);
    }
    rows.push_back(row);
  }
  return rows;
}

inline json sweep_report(const RunConfig& c) {
  json rows = json::array();
  for (const SweepRow& r : sweep_rows(c))
    rows.push_back({{"cores", r.cores},
                    {"compute_cycles", r.compute.to_double()},
                    {"comm_cycles", r.comm.to_double()},
                    {"total_cycles", r.total.to_double()}});
  json j = {{"schema_version", rpt::kSchemaVersion},
            {"command", "sweep"},
            {"mode", c.run.sweep && c.run.sweep->period ? "period" : "uniform"},
            {"rows", rows},
            {"config", config_echo(c)}};
  if (c.run.sweep && c.run.sweep->period) j["period"] = *c.run.sweep->period;
  return j;
}

inline std::string sweep_csv(const RunConfig& c) {
  std::ostringstream os;
  os << "cores,compute_cycles,comm_cycles,total_cycles\n";
  for (const SweepRow& r : sweep_rows(c))
    os << r.cores << ',' << rpt::num(r.compute.to_double()) << ',' << rpt::num(r.comm.to_double())
       << ',' << rpt::num(r.total.to_double()) << '\n';
  return os.str();
}

// ---- output plumbing ----

inline void deliver(const RunConfig& c, const std::string& payload, std::ostream& out) {
  if (c.run.out.empty()) {
    out << payload;
    if (!payload.empty() && payload.back() != '\n') out << '\n';
    return;
  }
  if (std::filesystem::exists(c.run.out) && !c.run.overwrite)
    throw ValidationError("run.out: '" + c.run.out +
                          "' already exists; pass --overwrite to replace it");
  std::ofstream f(c.run.out, std::ios::binary);
  if (!f) throw ValidationError("run.out: cannot open '" + c.run.out + "' for writing");
  f << payload;
  if (!payload.empty() && payload.back() != '\n') f << '\n';
  out << "wrote " << c.run.format << " report to " << c.run.out << "\n";
}

inline int cmd_plan(const RunConfig& c, std::ostream& out) {
  const json j = plan_report(c);
  if (!c.run.out.empty()) {
    out << "closed form: fp allocation " << j["closed"]["allocation_fp"].dump() << ", T = "
        << j["closed"]["epoch_time_cycles"].get<double>() << " cycles\n"
        << "brute force: fp allocation " << j["brute"]["allocation_fp"].dump() << ", T = "
        << j["brute"]["epoch_time_cycles"].get<double>() << " cycles\n"
        << "gap: time +" << j["gap"]["time_diff_pct"].get<double>() << "%, cores "
        << j["gap"]["core_error_pct"].get<double>() << "%\n";
  }
  deliver(c, j.dump(2), out);
  return 0;
}

// Exit code 3 flags the multi-round memory condition: the mapping itself is
// emitted in full, but the one-round memory closed form does not apply and the
// report says so instead of approximating.
inline int cmd_map(const RunConfig& c, std::ostream& out) {
  const ResolvedModel m = resolve_model(c);
  const CoreAllocation alloc = select_allocation(c, m);
  const Mapping mp = build_mapping(c.run.strategy, alloc, c.onoc, m.schedule);
  const MappingReport rep = analyze_mapping(mp, c.fcnn, c.onoc);
  if (c.run.format == "csv") {
    deliver(c, rpt::assignment_csv(mp), out);
  } else {
    json j = rpt::mapping_json(mp);
    j["schema_version"] = rpt::kSchemaVersion;
    j["command"] = "map";
    j["assignment"] = rpt::assignment_json(mp);
    j["report"] = rpt::mapping_report_json(rep);
    j["config"] = config_echo(c);
    deliver(c, j.dump(2), out);
  }
  if (!rep.memory_closed_form_valid) {
    std::cerr << "infeasible: " << rep.memory_note << "\n";
    return 3;
  }
  return 0;
}

inline int cmd_simulate(const RunConfig& c, std::ostream& out) {
  deliver(c, c.run.format == "csv" ? simulate_csv(c) : simulate_report(c).dump(2), out);
  return 0;
}

inline int cmd_compare(const RunConfig& c, std::ostream& out) {
  deliver(c, c.run.format == "csv" ? compare_csv(c) : compare_report(c).dump(2), out);
  return 0;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out) {
  deliver(c, c.run.format == "csv" ? sweep_csv(c) : sweep_report(c).dump(2), out);
  return 0;
}

inline int cmd_defaults(const RunConfig& c, std::ostream& out) {
  deliver(c, config_echo(c).dump(2), out);
  return 0;
}

}  // namespace onoc
