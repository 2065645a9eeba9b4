#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "swapsched/local_search.hpp"
#include "test_util.hpp"

using namespace swapsched;
using namespace swapsched::testutil;

namespace {

Instance tiny(int B, int N, int T, std::vector<int> wend, std::vector<int> bwin,
              std::vector<int> p, double alpha, int gamma) {
  Instance inst;
  inst.num_batteries = B;
  inst.num_ports = N;
  inst.num_periods = T;
  inst.num_windows = static_cast<int>(wend.size());
  inst.window_end = std::move(wend);
  inst.battery_window = std::move(bwin);
  inst.demand_hours = std::move(p);
  inst.price.resize(T);
  for (int t = 0; t < T; ++t) inst.price[t] = 4.0 + ((t * 3) % 6);
  inst.alpha = alpha;
  inst.gamma = gamma;
  inst.validate();
  return inst;
}

// Reservoir sample of feasible schedules.
std::vector<Schedule> sample_feasible(const Instance& inst, int want,
                                      std::mt19937& rng) {
  const int B = inst.num_batteries, N = inst.num_ports, T = inst.num_periods;
  std::vector<Schedule> out;
  long seen = 0;
  std::vector<int> occ(N * T, 0);
  std::function<void(int)> rec = [&](int slot) {
    if (slot == N * T) {
      Schedule sched = Schedule::zeros(inst);
      for (int k = 0; k < N; ++k)
        for (int t = 1; t <= T; ++t)
          if (occ[k * T + t - 1] > 0)
            sched.x[inst.xidx(occ[k * T + t - 1] - 1, k, t)] = 1;
      sched.y = derive_switches(inst, sched.x);
      if (!check_feasible(inst, sched).feasible) return;
      ++seen;
      if (static_cast<int>(out.size()) < want) {
        out.push_back(sched);
      } else {
        long pick = std::uniform_int_distribution<long>(0, seen - 1)(rng);
        if (pick < want) out[pick] = sched;
      }
      return;
    }
    int k = slot / T, t = slot % T + 1;
    for (int j = 0; j <= B; ++j) {
      if (j > 0 && inst.horizon_of(j - 1) < t) continue;
      occ[slot] = j;
      rec(slot + 1);
    }
    occ[slot] = 0;
  };
  rec(0);
  return out;
}

std::vector<double> random_tilde(const Instance& inst, std::mt19937& rng) {
  std::vector<double> x(inst.x_size(), 0.0);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int j = 0; j < inst.num_batteries; ++j)
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t <= inst.horizon_of(j); ++t)
        x[inst.xidx(j, k, t)] = d(rng);
  return x;
}

}  // namespace

TEST_CASE("ergodic stream follows the weight rule") {
  Instance one = tiny(1, 1, 2, {2}, {0}, {1}, 1.0, 1);
  ErgodicState st = make_ergodic(one, 1.0);
  update_ergodic(st, {1, 0});
  CHECK(st.x_tilde[0] == doctest::Approx(1.0));
  update_ergodic(st, {0, 0});
  update_ergodic(st, {1, 0});
  // weights 1, 2, 3 over values 1, 0, 1
  CHECK(st.x_tilde[0] == doctest::Approx(2.0 / 3.0));

  // a = 0: plain average
  st = make_ergodic(one, 0.0);
  update_ergodic(st, {1, 0});
  update_ergodic(st, {0, 1});
  update_ergodic(st, {0, 1});
  update_ergodic(st, {1, 0});
  CHECK(st.x_tilde[0] == doctest::Approx(0.5));
  CHECK(st.x_tilde[1] == doctest::Approx(0.5));
}

TEST_CASE("stream equals the explicit weighted sum") {
  Instance inst = tiny(2, 2, 3, {3}, {0, 0}, {2, 1}, 1.0, 2);
  std::mt19937 rng(41);
  for (double a : {0.0, 1.0, 4.0}) {
    ErgodicState st = make_ergodic(inst, a);
    std::vector<std::vector<std::uint8_t>> history;
    for (int i = 0; i < 50; ++i) {
      std::vector<std::uint8_t> x(inst.x_size(), 0);
      for (auto& v : x) v = std::uniform_int_distribution<int>(0, 1)(rng);
      history.push_back(x);
      update_ergodic(st, x);
    }
    double wsum = 0;
    std::vector<double> explicit_mix(inst.x_size(), 0.0);
    for (int p = 0; p < 50; ++p) wsum += std::pow(p + 1.0, a);
    for (int p = 0; p < 50; ++p) {
      double phi = std::pow(p + 1.0, a) / wsum;
      for (std::size_t q = 0; q < explicit_mix.size(); ++q)
        explicit_mix[q] += phi * history[p][q];
    }
    for (std::size_t q = 0; q < explicit_mix.size(); ++q)
      CHECK(std::abs(st.x_tilde[q] - explicit_mix[q]) <= 1e-10);
    CHECK(st.alpha_cum == doctest::Approx(wsum).epsilon(1e-12));
    for (double v : st.x_tilde) {
      CHECK(v >= -1e-12);
      CHECK(v <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("neighborhood picks the costliest ports") {
  Instance inst = tiny(2, 2, 2, {2}, {0, 0}, {1, 1}, 1.0, 2);
  Schedule best = Schedule::zeros(inst);
  best.x[inst.xidx(0, 0, 1)] = 1;
  best.x[inst.xidx(1, 1, 1)] = 1;
  best.y = derive_switches(inst, best.x);

  // port 0 carries ergodic mass 5/price, port 1 carries 3/price
  std::vector<double> tilde(inst.x_size(), 0.0);
  tilde[inst.xidx(0, 0, 1)] = 5.0 / inst.price[0];
  tilde[inst.xidx(0, 1, 1)] = 3.0 / inst.price[0];
  Neighborhood nb = select_neighborhood(inst, tilde, best, 1);
  REQUIRE(nb.ports == std::vector<int>{0});
  CHECK(nb.batteries_per_window[0] == std::vector<int>{0});

  // sigma = N: everything
  nb = select_neighborhood(inst, tilde, best, 2);
  CHECK(nb.ports == std::vector<int>{0, 1});
  CHECK(nb.batteries_per_window[0] == std::vector<int>{0, 1});

  // all-zero ergodic mass: lowest indices by tie-break
  nb = select_neighborhood(inst, std::vector<double>(inst.x_size(), 0.0), best,
                           1);
  CHECK(nb.ports == std::vector<int>{0});
}

TEST_CASE("empty neighborhood returns the incumbent") {
  Instance inst = tiny(1, 2, 2, {2}, {0}, {1}, 1.0, 1);
  Schedule best = Schedule::zeros(inst);
  best.x[inst.xidx(0, 1, 2)] = 1;
  best.y = derive_switches(inst, best.x);
  Neighborhood nb;
  nb.ports = {0};
  nb.batteries_per_window.resize(1);
  LocalSearchResult res = local_search_step(inst, best, nb);
  CHECK(!res.improved);
  CHECK(res.schedule.x == best.x);
}

TEST_CASE("search never worsens and keeps feasibility") {
  std::mt19937 rng(13);
  std::vector<Instance> fam = {
      tiny(2, 1, 4, {4}, {0, 0}, {2, 1}, 1.0, 1),
      tiny(3, 2, 3, {2, 3}, {0, 1, 1}, {2, 1, 2}, 0.8, 2),
      tiny(2, 2, 3, {3}, {0, 0}, {3, 2}, 0.7, 2),
  };
  for (const Instance& inst : fam) {
    std::vector<Schedule> starts = sample_feasible(inst, 12, rng);
    REQUIRE(!starts.empty());
    for (const Schedule& start : starts) {
      double before = evaluate_objective(inst, start).scalarized;
      int sigma =
          std::uniform_int_distribution<int>(1, inst.num_ports)(rng);
      Neighborhood nb =
          select_neighborhood(inst, random_tilde(inst, rng), start, sigma);
      LocalSearchResult res = local_search_step(inst, start, nb);
      CHECK(res.value.scalarized <= before + 1e-9);
      CHECK(check_feasible(inst, res.schedule).feasible);
      // neighborhood batteries keep their delivered hours
      for (const auto& wb : nb.batteries_per_window)
        for (int j : wb) {
          long h0 = 0, h1 = 0;
          for (int k = 0; k < inst.num_ports; ++k)
            for (int t = 1; t <= inst.horizon_of(j); ++t) {
              h0 += start.x[inst.xidx(j, k, t)];
              h1 += res.schedule.x[inst.xidx(j, k, t)];
            }
          CHECK(h0 == h1);
        }
    }
  }
}

TEST_CASE("full-width search with exact hours reaches the optimum") {
  Instance inst = tiny(2, 2, 3, {3}, {0, 0}, {2, 2}, 1.0, 2);
  BruteBest best = brute_best(inst);
  REQUIRE(best.found);
  std::mt19937 rng(29);
  std::vector<Schedule> all = sample_feasible(inst, 40, rng);
  // hour totals are preserved by the search, so only starts that deliver the
  // bare requirement can reach the overall optimum
  std::vector<Schedule> starts;
  for (const Schedule& s : all) {
    bool exact = true;
    for (int j = 0; j < inst.num_batteries; ++j) {
      long h = 0;
      for (int k = 0; k < inst.num_ports; ++k)
        for (int t = 1; t <= inst.horizon_of(j); ++t)
          h += s.x[inst.xidx(j, k, t)];
      if (h != inst.required_hours(j)) exact = false;
    }
    if (exact && starts.size() < 5) starts.push_back(s);
  }
  REQUIRE(!starts.empty());
  for (const Schedule& start : starts) {
    Neighborhood nb = select_neighborhood(
        inst, random_tilde(inst, rng), start, inst.num_ports);
    LocalSearchResult res = local_search_step(inst, start, nb);
    CHECK(res.value.scalarized == doctest::Approx(best.value).epsilon(1e-9));
  }
}

TEST_CASE("reallocating the two costly ports of the showcase plan") {
  Instance inst = showcase_instance(4);
  Schedule inc = showcase_incumbent(inst);
  REQUIRE(check_feasible(inst, inc).feasible);
  ObjectiveValue before = evaluate_objective(inst, inc);
  CHECK(before.electricity_cost == doctest::Approx(196.1));
  CHECK(before.switch_count == 13);

  Neighborhood nb;
  nb.ports = {0, 1};
  nb.batteries_per_window.resize(1);
  for (int j : {0, 1, 3, 5, 7}) nb.batteries_per_window[0].push_back(j);
  LocalSearchResult res = local_search_step(inst, inc, nb);
  REQUIRE(res.improved);
  CHECK(res.value.electricity_cost <= 189.6 + 1e-6);
  CHECK(res.value.switch_count <= 9);
  CHECK(check_feasible(inst, res.schedule).feasible);
}
