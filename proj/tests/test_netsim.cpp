#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

#include <vector>

using namespace onoc;

TEST_CASE("wavelength matrix batches senders into TDM slots", "[netsim]") {
  const std::vector<int> senders{10, 11, 12, 13, 14};
  const std::vector<int> receivers{20, 21};
  const WavelengthMatrix wm =
      make_wavelength_matrix(senders, receivers, 2, Direction::clockwise);

  REQUIRE(wm.slots.size() == 3);  // ceil(5 / 2)
  REQUIRE(wm.slots[0].size() == 2);
  CHECK(wm.slots[0][0].sender == 10);
  CHECK(wm.slots[0][0].wavelength == 1);
  CHECK(wm.slots[0][1].sender == 11);
  CHECK(wm.slots[0][1].wavelength == 2);
  REQUIRE(wm.slots[1].size() == 2);
  CHECK(wm.slots[1][0].sender == 12);
  CHECK(wm.slots[1][0].wavelength == 1);
  CHECK(wm.slots[1][1].sender == 13);
  CHECK(wm.slots[1][1].wavelength == 2);
  REQUIRE(wm.slots[2].size() == 1);  // tail slot holds the remainder
  CHECK(wm.slots[2][0].sender == 14);
  CHECK(wm.slots[2][0].wavelength == 1);
  CHECK(wm.receivers == receivers);  // every receiver listens in every slot
  CHECK(wm.direction == Direction::clockwise);

  // three senders under a generous budget share one slot on channels 1..3
  const WavelengthMatrix one =
      make_wavelength_matrix({0, 1, 2}, {3}, 4, Direction::anticlockwise);
  REQUIRE(one.slots.size() == 1);
  REQUIRE(one.slots[0].size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(one.slots[0][static_cast<size_t>(k)].sender == k);
    CHECK(one.slots[0][static_cast<size_t>(k)].wavelength == k + 1);
  }

  CHECK_THROWS_AS(make_wavelength_matrix({}, {1}, 2, Direction::clockwise), ValidationError);
  CHECK_THROWS_AS(make_wavelength_matrix({1}, {}, 2, Direction::clockwise), ValidationError);
  CHECK_THROWS_AS(make_wavelength_matrix({1}, {2}, 0, Direction::clockwise), ValidationError);
}

TEST_CASE("optical round simulation on the tiny worked instance", "[netsim]") {
  // [2,2,2], one core per period, unit costs: per-period compute 2,2,6,6 and
  // one slot of comm in each sending period -> 18 cycles total
  const FcnnSpec f = tu::make_fcnn({2, 2, 2});
  const auto sched = build_period_schedule(f);
  const WorkloadParams w = tu::unit_workload(2);
  const OnocConfig onoc = tu::make_ring(2, 1);
  const Mapping mp = map_fixed(tu::alloc_fp({1, 1}), onoc, sched);

  const EpochReport rep = simulate_epoch(mp, w, onoc);
  CHECK(rep.backend == Backend::onoc);
  CHECK(rep.total_time == Rat(18));
  CHECK(rep.total_time == epoch_time(mp.alloc, sched, w, onoc));
  CHECK(rep.d_input == Rat(0));

  REQUIRE(rep.per_period.size() == 4);
  CHECK(rep.per_period[0].compute == Rat(2));
  CHECK(rep.per_period[1].compute == Rat(2));
  CHECK(rep.per_period[2].compute == Rat(6));
  CHECK(rep.per_period[3].compute == Rat(6));
  CHECK(rep.per_period[0].comm == Rat(1));
  CHECK(rep.per_period[1].comm == Rat(0));
  CHECK(rep.per_period[2].comm == Rat(1));
  CHECK(rep.per_period[3].comm == Rat(0));
  CHECK(rep.per_period[0].slot_count == 1);
  CHECK(rep.per_period[1].slot_count == 0);
  CHECK(rep.per_period[2].slot_count == 1);
  CHECK(rep.per_period[3].slot_count == 0);

  // handover matrices exist exactly for the sending periods
  REQUIRE(rep.wavelength_matrices.size() == 2);
  CHECK(rep.wavelength_matrices[0].period == 1);
  CHECK(rep.wavelength_matrices[0].direction == Direction::clockwise);
  CHECK(rep.wavelength_matrices[1].period == 3);
  CHECK(rep.wavelength_matrices[1].direction == Direction::anticlockwise);
  CHECK(rep.wavelength_matrices[1].receivers == mp.cores_of(4));

  // 2 neurons * 4 bytes * 8 bits per sending period
  CHECK(rep.total_bits == 128);
  CHECK(rep.per_period[0].slot_bits == std::vector<long long>{64});
  CHECK(rep.transitions == simulate_transitions(mp));
  CHECK(rep.total_work == Rat(16));  // 2*(1*2) forward + 2*(1*2*3) backward

  SECTION("the silent compatibility mode drops the first handover's cost") {
    const EpochReport quiet = simulate_epoch(mp, w, onoc, CommMode::period_one_silent);
    CHECK(quiet.total_time == Rat(17));
    CHECK(quiet.per_period[0].comm == Rat(0));
    CHECK(quiet.per_period[0].slot_count == 0);
    CHECK(quiet.wavelength_matrices.size() == 1);
  }
}

TEST_CASE("optical timing is layout independent", "[netsim]") {
  // slot counts depend on core counts, not on which physical cores are used,
  // so all three placement strategies replay the same timeline
  const FcnnSpec f = tu::make_fcnn({6, 6, 8, 10, 6});
  const auto sched = build_period_schedule(f);
  const CoreAllocation alloc = tu::alloc_fp({3, 4, 5, 3});
  const OnocConfig onoc = tu::make_ring(9, 2);
  const WorkloadParams w =
      tu::make_workload({3, 1, 4, 2}, {2, 5, 1, 3}, {2, 3, 1, 5, 4, 6, 2, 3}, 2,
                        {1, 0, 2, 0, 1, 3, 0, 1}, 9);

  const EpochReport fm = simulate_epoch(map_fixed(alloc, onoc, sched), w, onoc);
  const EpochReport rrm = simulate_epoch(map_round_robin(alloc, onoc, sched), w, onoc);
  const EpochReport orrm = simulate_epoch(map_overlapped(alloc, onoc, sched), w, onoc);

  CHECK(fm.total_time == rrm.total_time);
  CHECK(fm.total_time == orrm.total_time);
  CHECK(fm.total_bits == rrm.total_bits);
  CHECK(fm.total_bits == orrm.total_bits);
  CHECK(fm.total_time == epoch_time(alloc, sched, w, onoc));
  // but the power profile differs
  CHECK(fm.transitions == 14);
  CHECK(rrm.transitions == 54);
  CHECK(orrm.transitions == 30);

  for (const auto& wm : rrm.wavelength_matrices) {
    // every slot except possibly the last is full
    for (size_t s = 0; s + 1 < wm.slots.size(); ++s)
      CHECK(static_cast<int>(wm.slots[s].size()) == onoc.lambda_max);
    CHECK_FALSE(wm.slots.empty());
    CHECK_FALSE(wm.slots.back().empty());
  }
}

TEST_CASE("energy breakdown applies the user coefficients", "[netsim]") {
  const FcnnSpec f = tu::make_fcnn({2, 2, 2});
  const auto sched = build_period_schedule(f);
  OnocConfig onoc = tu::make_ring(2, 1);
  onoc.energy.static_power_watts = 1.0;
  onoc.energy.dynamic_joules_per_bit = 2.0;
  onoc.energy.joules_per_work_unit = 3.0;
  onoc.energy.joules_per_state_transition = 5.0;

  const Mapping mp = map_fixed(tu::alloc_fp({1, 1}), onoc, sched);
  const EpochReport rep = simulate_epoch(mp, tu::unit_workload(2), onoc);

  const double seconds = 18.0 / 3.4e9;
  CHECK(rep.energy.static_joules == Catch::Approx(seconds));
  CHECK(rep.energy.dynamic_comm_joules == Catch::Approx(2.0 * 128));
  CHECK(rep.energy.compute_joules == Catch::Approx(3.0 * 16));
  CHECK(rep.energy.transition_joules == Catch::Approx(5.0 * 2));  // one always-on core
  CHECK(rep.energy.total() ==
        Catch::Approx(seconds + 256.0 + 48.0 + 10.0));

  // zero coefficients (the default) yield zero joules
  const EpochReport plain =
      simulate_epoch(mp, tu::unit_workload(2), tu::make_ring(2, 1));
  CHECK(plain.energy.total() == 0.0);
}

TEST_CASE("shortest ring path", "[netsim]") {
  CHECK(ring_hops(0, 5, 9) == 4);  // anticlockwise is shorter
  CHECK(ring_hops(0, 3, 4) == 1);
  CHECK(ring_hops(3, 0, 4) == 1);
  CHECK(ring_hops(2, 2, 7) == 0);
  CHECK(ring_hops(0, 4, 8) == 4);  // antipodal tie
}

TEST_CASE("electrical baseline parameters validate", "[netsim]") {
  EnocParams p;
  CHECK(p.hop_latency == Rat(2));
  CHECK(p.flit_bytes == 16);
  CHECK(p.packet_bytes == 64);
  CHECK(p.serialization == Rat(2));
  CHECK_NOTHROW(p.validate());

  EnocParams bad = p;
  bad.packet_bytes = 8;  // smaller than a flit
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  bad.flit_bytes = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = p;
  bad.hop_latency = Rat(-1);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("electrical round simulation by hand", "[netsim]") {
  // [2,2,2] on four cores, forward allocation [2,1]: compute 1,2,6,3.
  // Handover 1: core 1 -> core 0, 4-byte payload -> one 64-byte packet ->
  // 4 flits -> 1*2 + 4*2 = 10 cycles (the core-0 self-message is free).
  // Handover 3: core 0 -> core 1, 8 bytes -> still 4 flits -> 10 cycles.
  const FcnnSpec f = tu::make_fcnn({2, 2, 2});
  const auto sched = build_period_schedule(f);
  const OnocConfig onoc = tu::make_ring(4, 1);
  const Mapping mp = map_fixed(tu::alloc_fp({2, 1}), onoc, sched);

  const EpochReport rep = simulate_enoc_epoch(mp, tu::unit_workload(2), EnocParams{});
  CHECK(rep.backend == Backend::enoc);
  CHECK(rep.total_time == Rat(32));
  REQUIRE(rep.per_period.size() == 4);
  CHECK(rep.per_period[0].compute == Rat(1));
  CHECK(rep.per_period[1].compute == Rat(2));
  CHECK(rep.per_period[2].compute == Rat(6));
  CHECK(rep.per_period[3].compute == Rat(3));
  CHECK(rep.per_period[0].comm == Rat(10));
  CHECK(rep.per_period[2].comm == Rat(10));
  CHECK(rep.per_period[0].slot_count == 1);  // unicast message count
  CHECK(rep.per_period[2].slot_count == 1);
  CHECK(rep.total_bits == 96);  // 32 + 64
  CHECK(rep.wavelength_matrices.empty());
  CHECK(rep.transitions == simulate_transitions(mp));

  SECTION("single-flit messages pay one hop and one flit time") {
    EnocParams small;
    small.hop_latency = Rat(3);
    small.flit_bytes = 8;
    small.packet_bytes = 8;
    small.serialization = Rat(5);
    const EpochReport r = simulate_enoc_epoch(mp, tu::unit_workload(2), small);
    CHECK(r.per_period[0].comm == Rat(8));   // 1 hop * 3 + 1 flit * 5
    CHECK(r.per_period[2].comm == Rat(8));
    CHECK(r.total_time == Rat(28));
  }

  SECTION("a lone core talking to itself transmits nothing") {
    const OnocConfig two = tu::make_ring(2, 1);
    const Mapping solo = map_fixed(tu::alloc_fp({1, 1}), two, sched);
    const EpochReport r = simulate_enoc_epoch(solo, tu::unit_workload(2), EnocParams{});
    CHECK(r.total_time == Rat(16));  // pure compute
    CHECK(r.total_bits == 0);
    CHECK(r.per_period[0].slot_count == 0);
  }

  SECTION("energy is opt-in via the shared coefficient set") {
    OnocConfig coeffs = tu::make_ring(4, 1);
    coeffs.energy.dynamic_joules_per_bit = 0.5;
    const EnergyBreakdown e = compute_energy(rep, coeffs);
    CHECK(e.dynamic_comm_joules == Catch::Approx(48.0));
    CHECK(e.static_joules == 0.0);
    CHECK(rep.energy.total() == 0.0);  // the simulator itself leaves it zeroed
  }
}
