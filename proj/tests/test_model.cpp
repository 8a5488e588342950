#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

#include <stdexcept>

using namespace onoc;

TEST_CASE("network description validation", "[model]") {
  CHECK_THROWS_AS(tu::make_fcnn({5}).validate(), ValidationError);
  CHECK_THROWS_AS(tu::make_fcnn({5, 0}).validate(), ValidationError);
  CHECK_THROWS_AS(tu::make_fcnn({5, 3}, 0).validate(), ValidationError);
  CHECK_THROWS_AS(tu::make_fcnn({5, 3}, 1, 0).validate(), ValidationError);
  FcnnSpec labeled = tu::make_fcnn({5, 3});
  labeled.labels = {"input"};  // needs one label per layer
  CHECK_THROWS_AS(labeled.validate(), ValidationError);
  labeled.labels = {"input", "relu"};
  CHECK_NOTHROW(labeled.validate());
}

TEST_CASE("period schedule for a three-hidden-layer network", "[model]") {
  const PeriodSchedule s = build_period_schedule(tu::make_fcnn({784, 1000, 500, 10}));
  REQUIRE(s.l() == 3);
  REQUIRE(s.num_periods() == 6);

  CHECK(s.period(1).phase == Phase::forward);
  CHECK(s.period(1).layer == 1);
  CHECK(s.neuron_count(1) == 1000);
  CHECK(s.period(3).phase == Phase::forward);
  CHECK(s.neuron_count(3) == 10);
  CHECK(s.period(4).phase == Phase::backward);
  CHECK(s.period(4).layer == 3);
  CHECK(s.neuron_count(4) == 10);
  CHECK(s.period(6).layer == 1);
  CHECK(s.neuron_count(6) == 1000);

  // incoming widths seen by each period
  CHECK(s.prev_layer_size_of(1) == 784);
  CHECK(s.prev_layer_size_of(2) == 1000);
  CHECK(s.prev_layer_size_of(3) == 500);
  CHECK(s.prev_layer_size_of(4) == 500);
  CHECK(s.prev_layer_size_of(5) == 1000);
  CHECK(s.prev_layer_size_of(6) == 784);

  // mirror symmetry around the phase boundary
  for (int i = 1; i <= s.l(); ++i) CHECK(s.neuron_count(i) == s.neuron_count(2 * s.l() - i + 1));

  CHECK_THROWS_AS(s.period(0), ValidationError);
  CHECK_THROWS_AS(s.period(7), ValidationError);
}

TEST_CASE("backward periods map to mirrored layers", "[model]") {
  const PeriodSchedule s = build_period_schedule(tu::make_fcnn({4, 8, 2}));
  REQUIRE(s.l() == 2);
  CHECK(s.period(3).phase == Phase::backward);
  CHECK(s.period(3).layer == 2);
  CHECK(s.neuron_count(3) == 2);
  CHECK(s.period(4).layer == 1);
  CHECK(s.neuron_count(4) == 8);
}

TEST_CASE("minimal two-layer network has two periods", "[model]") {
  const PeriodSchedule s = build_period_schedule(tu::make_fcnn({2, 2}));
  REQUIRE(s.l() == 1);
  REQUIRE(s.num_periods() == 2);
  CHECK(s.period(1).phase == Phase::forward);
  CHECK(s.period(2).phase == Phase::backward);
  CHECK(s.period(1).layer == 1);
  CHECK(s.period(2).layer == 1);
}

TEST_CASE("workload defaults from the network shape", "[model]") {
  const OnocConfig onoc;  // 40 Gb/s per wavelength, 3.4 GHz clock, 16-byte flits
  const WorkloadParams w = derive_workload(tu::make_fcnn({2, 2}), onoc);
  REQUIRE(w.alpha.size() == 1);
  CHECK(w.alpha[0] == Rat(5));  // 2*2*1 + 1
  CHECK(w.beta[0] == Rat(2));
  REQUIRE(w.B.size() == 2);
  // 4-byte payload: 32 bits * (3.4e9 / 40e9) + 1 cycle o/e-e/o + 2 cycles * 1 flit
  CHECK(w.B[0] == Rat(143, 25));
  CHECK(w.B[0] == w.B[1]);
  CHECK(w.C == Rat(1));
  CHECK(w.d_input == Rat(0));
  for (const Rat& z : w.zeta) CHECK(z.is_zero());
}

TEST_CASE("batch size scales the compute volumes linearly", "[model]") {
  const OnocConfig onoc;
  const WorkloadParams w1 = derive_workload(tu::make_fcnn({2, 2}, 1), onoc);
  const WorkloadParams w8 = derive_workload(tu::make_fcnn({2, 2}, 8), onoc);
  CHECK(w8.alpha[0] == Rat(8) * w1.alpha[0]);
  CHECK(w8.beta[0] == Rat(8) * w1.beta[0]);
  CHECK(w8.alpha[0] >= w1.alpha[0]);  // monotone in batch size
}

TEST_CASE("per-core payload reference scales the transmission default", "[model]") {
  const OnocConfig onoc;
  const WorkloadParams w = derive_workload(tu::make_fcnn({2, 2}), onoc, {}, 2);
  // 8-byte payload: 64 bits * 17/200 + 1 + 2  (still one 16-byte flit)
  CHECK(w.B[0] == Rat(211, 25));
  CHECK_THROWS_AS(derive_workload(tu::make_fcnn({2, 2}), onoc, {}, 0), ValidationError);
}

TEST_CASE("workload overrides take precedence over defaults", "[model]") {
  const OnocConfig onoc;
  WorkloadOverrides ov;
  ov.C = Rat(6000000000LL);
  ov.alpha = {Rat(7)};
  const WorkloadParams w = derive_workload(tu::make_fcnn({2, 2}), onoc, ov);
  CHECK(w.C == Rat(6000000000LL));
  CHECK(w.alpha[0] == Rat(7));
  CHECK(w.beta[0] == Rat(2));  // untouched field keeps its default

  WorkloadOverrides bad;
  bad.alpha = {Rat(-1)};
  CHECK_THROWS_AS(derive_workload(tu::make_fcnn({2, 2}), onoc, bad), ValidationError);
  WorkloadOverrides wrong_len;
  wrong_len.B = {Rat(1)};  // needs 2l entries
  CHECK_THROWS_AS(derive_workload(tu::make_fcnn({2, 2, 2}), onoc, wrong_len), ValidationError);
}

TEST_CASE("workload accessors are period-indexed", "[model]") {
  // l = 2: beta entries follow periods 3 and 4 in order
  WorkloadParams w = tu::make_workload({1, 2}, {10, 20}, {5, 6, 7, 8});
  CHECK(w.alpha_at(1) == Rat(1));
  CHECK(w.alpha_at(2) == Rat(2));
  CHECK(w.beta_at(3) == Rat(10));
  CHECK(w.beta_at(4) == Rat(20));
  CHECK(w.B_at(1) == Rat(5));
  CHECK(w.B_at(4) == Rat(8));
}

TEST_CASE("system configuration validation", "[model]") {
  OnocConfig o;
  CHECK_NOTHROW(o.validate());
  o.phi = Rat(3, 2);
  CHECK_THROWS_AS(o.validate(), ValidationError);
  o.phi = Rat(0);
  CHECK_THROWS_AS(o.validate(), ValidationError);
  o = OnocConfig{};
  o.lambda_max = 0;
  CHECK_THROWS_AS(o.validate(), ValidationError);
  o = OnocConfig{};
  o.m = 0;
  CHECK_THROWS_AS(o.validate(), ValidationError);

  OnocConfig cap;
  cap.m = 10;
  cap.phi = Rat(1, 2);
  CHECK(cap.phi_core_cap() == 5);
  cap.phi = Rat(1, 4);
  CHECK(cap.phi_core_cap() == 2);  // floor(2.5)
}
