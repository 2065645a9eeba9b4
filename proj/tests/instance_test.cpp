#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "swapsched/instance.hpp"
#include "test_util.hpp"

using namespace swapsched;
using testutil::schedule_from_ports;
using testutil::showcase_instance;

TEST_CASE("augmentation weight keeps switching subordinate") {
  Instance inst = showcase_instance();
  double w = augmentation_weight(inst);
  CHECK(w == doctest::Approx(7.3 / 17.0));
  // Even a switch at every boundary on every allowed slot stays below the
  // cheapest single period of electricity.
  CHECK(w * (inst.num_periods - 1) * inst.gamma < inst.min_price());
}

TEST_CASE("objective evaluation on a known schedule") {
  Instance inst = showcase_instance();
  Schedule s = testutil::showcase_incumbent(inst);
  ObjectiveValue v = evaluate_objective(inst, s);
  CHECK(v.electricity_cost == doctest::Approx(196.1));
  CHECK(v.switch_count == 13);
  CHECK(v.scalarized == doctest::Approx(196.1 + 13 * 7.3 / 17.0));

  Schedule s2 = testutil::showcase_improved(inst);
  ObjectiveValue v2 = evaluate_objective(inst, s2);
  CHECK(v2.electricity_cost == doctest::Approx(189.6));
  CHECK(v2.switch_count == 9);
  CHECK(v2.scalarized < v.scalarized);
}

TEST_CASE("feasibility of the showcase schedules") {
  Instance inst = showcase_instance();
  CHECK(check_feasible(inst, testutil::showcase_incumbent(inst)).feasible);
  CHECK(check_feasible(inst, testutil::showcase_improved(inst)).feasible);

  // With gamma = 3 the 13-switch schedule hits four simultaneous swaps.
  Instance tight = showcase_instance(3);
  auto rep = check_feasible(tight, testutil::showcase_incumbent(tight));
  CHECK(!rep.feasible);
  bool saw_2h = false;
  for (auto& v : rep.violations) saw_2h |= v.constraint == "2h";
  CHECK(saw_2h);
  // ... while the improved one still fits.
  CHECK(check_feasible(tight, testutil::showcase_improved(tight)).feasible);
}

TEST_CASE("violation reporting per constraint family") {
  Instance inst = showcase_instance();
  SUBCASE("missing demand hours") {
    Schedule s = testutil::showcase_incumbent(inst);
    s.x[inst.xidx(2, 2, 1)] = 0;  // battery 3 loses an hour
    auto rep = check_feasible(inst, s);
    CHECK(!rep.feasible);
    bool hit = false;
    for (auto& v : rep.violations)
      hit |= v.constraint == "2b" && v.index == std::vector<int>{3};
    CHECK(hit);
  }
  SUBCASE("port double-booked") {
    Schedule s = testutil::showcase_incumbent(inst);
    s.x[inst.xidx(5, 0, 1)] = 1;  // battery 6 also on port 1 at t=1
    auto rep = check_feasible(inst, s);
    std::set<std::string> ids;
    for (auto& v : rep.violations) ids.insert(v.constraint);
    CHECK(ids.count("2d"));
  }
  SUBCASE("battery on two ports") {
    Schedule s = testutil::showcase_incumbent(inst);
    s.x[inst.xidx(3, 1, 3)] = 1;  // battery 4 on ports 1 and 2 at t=3
    auto rep = check_feasible(inst, s);
    std::set<std::string> ids;
    for (auto& v : rep.violations) ids.insert(v.constraint);
    CHECK(ids.count("2e"));
    CHECK(ids.count("2d"));  // port 2 already held battery 8 there
  }
  SUBCASE("uncovered load and unload") {
    Schedule s = testutil::showcase_improved(inst);
    std::fill(s.y.begin(), s.y.end(), 0);
    auto rep = check_feasible(inst, s);
    std::set<std::string> ids;
    for (auto& v : rep.violations) ids.insert(v.constraint);
    CHECK(ids.count("2f"));
    CHECK(ids.count("2g"));
  }
}

TEST_CASE("derived switches are minimal and sufficient") {
  Instance inst = showcase_instance();
  Schedule s = testutil::showcase_incumbent(inst);
  auto y = derive_switches(inst, s.x);
  CHECK(y == s.y);
  // Dropping any single set bit breaks feasibility.
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!y[i]) continue;
    Schedule t = s;
    t.y[i] = 0;
    CHECK(!check_feasible(inst, t).feasible);
  }
}

TEST_CASE("partial-charge demand in the last window") {
  Instance inst;
  inst.num_batteries = 2;
  inst.num_ports = 1;
  inst.num_periods = 4;
  inst.num_windows = 2;
  inst.window_end = {2, 4};
  inst.battery_window = {0, 1};
  inst.demand_hours = {1, 3};
  inst.price = {4, 3, 2, 1};
  inst.alpha = 0.5;
  inst.gamma = 1;
  inst.validate();
  CHECK(inst.required_hours(0) == 1);
  CHECK(inst.required_hours(1) == 2);  // ceil(0.5 * 3)

  // Battery 2 may exceed its minimum; battery 1 must hit p exactly.
  Schedule s = schedule_from_ports(inst, {{1, 2, 2, 2}});
  CHECK(check_feasible(inst, s).feasible);
  Schedule over = schedule_from_ports(inst, {{1, 1, 2, 2}});
  auto rep = check_feasible(inst, over);
  CHECK(!rep.feasible);
  CHECK(rep.violations.front().constraint == "2c");
}

TEST_CASE("json round trip") {
  Instance inst = showcase_instance();
  std::string text = save_instance(inst);
  Instance back = load_instance(text);
  CHECK(back.num_batteries == inst.num_batteries);
  CHECK(back.window_end == inst.window_end);
  CHECK(back.demand_hours == inst.demand_hours);
  CHECK(back.price == inst.price);
  CHECK(back.alpha == inst.alpha);
  CHECK(back.gamma == inst.gamma);
}

TEST_CASE("json parse failures are reported with context") {
  CHECK_THROWS_AS(load_instance("{"), ParseError);
  CHECK_THROWS_WITH_AS(load_instance("{\"B\": 2}"),
                       doctest::Contains("missing key: N"), ParseError);
  Instance inst = showcase_instance();
  inst.demand_hours[0] = 99;  // more than the window allows
  CHECK_THROWS_AS(load_instance(save_instance(inst)), ParseError);
}

TEST_CASE("generator produces valid deterministic instances") {
  GeneratorOptions opt;
  opt.num_batteries = 20;
  opt.num_ports = 10;
  opt.gamma = 2;
  opt.seed = 7;
  Instance a = generate_instance(opt);
  Instance b = generate_instance(opt);
  CHECK(a.demand_hours == b.demand_hours);
  opt.seed = 8;
  Instance c = generate_instance(opt);
  CHECK(a.demand_hours != c.demand_hours);

  a.validate();
  CHECK(a.num_periods == 24);
  CHECK(a.window_end == std::vector<int>{14, 19, 24});
  // 40/35/25 split of 20 batteries
  int cnt[3] = {0, 0, 0};
  for (int w : a.battery_window) cnt[w]++;
  CHECK(cnt[0] == 8);
  CHECK(cnt[1] == 7);
  CHECK(cnt[2] == 5);
  for (int j = 0; j < a.num_batteries; ++j) {
    CHECK(a.demand_hours[j] >= 1);
    CHECK(a.demand_hours[j] <= 8);
  }
}

TEST_CASE("generator respects overrides and rejects dead ends") {
  GeneratorOptions opt;
  opt.num_batteries = 6;
  opt.num_ports = 3;
  opt.gamma = 1;
  opt.num_periods = 12;
  opt.num_windows = 2;
  opt.alpha = 0.8;
  opt.price_profile = "plan2";
  opt.seed = 3;
  Instance inst = generate_instance(opt);
  CHECK(inst.alpha == 0.8);
  CHECK(inst.num_windows == 2);
  CHECK(inst.window_end.back() == 12);

  GeneratorOptions doomed;
  doomed.num_batteries = 50;
  doomed.num_ports = 1;
  doomed.gamma = 1;
  doomed.num_periods = 6;
  doomed.num_windows = 1;
  CHECK_THROWS_AS(generate_instance(doomed), InstanceError);
}

TEST_CASE("price profiles have the expected day shape") {
  auto base = price_profile("base", 24);
  REQUIRE(base.size() == 24);
  // Morning and evening peaks.
  CHECK(*std::max_element(base.begin(), base.begin() + 12) == base[7]);
  CHECK(*std::max_element(base.begin() + 12, base.end()) == base[19]);
  auto ext = price_profile("extended", 24);
  // Extended plan keeps the afternoon expensive.
  double aft_base = 0, aft_ext = 0;
  for (int t = 12; t < 19; ++t) {
    aft_base += base[t];
    aft_ext += ext[t];
  }
  CHECK(aft_ext > aft_base);
  // Stabilised plans are flatter than the base profile.
  for (const char* name : {"plan1", "plan2"}) {
    auto p = price_profile(name, 24);
    double lo = *std::min_element(p.begin(), p.end());
    double hi = *std::max_element(p.begin(), p.end());
    CHECK(hi - lo < base[7] - *std::min_element(base.begin(), base.end()));
  }
  CHECK(price_profile("base", 12).size() == 12);
  CHECK_THROWS_AS(price_profile("nope", 24), InstanceError);
}
