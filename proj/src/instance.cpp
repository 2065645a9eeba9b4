#include "swapsched/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace swapsched {

int Instance::required_hours(int j) const {
  int p = demand_hours[j];
  if (in_last_window(j))
    return static_cast<int>(std::ceil(alpha * p - 1e-12));
  return p;
}

double Instance::min_price() const {
  if (price.empty()) throw InstanceError("price vector is empty");
  return *std::min_element(price.begin(), price.end());
}

void Instance::validate() const {
  if (num_batteries < 1) throw InstanceError("need at least one battery");
  if (num_ports < 1) throw InstanceError("need at least one port");
  if (num_periods < 2) throw InstanceError("need at least two periods");
  if (num_windows < 1 || num_windows > num_periods)
    throw InstanceError("bad window count");
  if (static_cast<int>(window_end.size()) != num_windows)
    throw InstanceError("window_end size mismatch");
  int prev = 0;
  for (int l = 0; l < num_windows; ++l) {
    if (window_end[l] <= prev)
      throw InstanceError("window_end must be strictly increasing");
    prev = window_end[l];
  }
  if (window_end.back() != num_periods)
    throw InstanceError("last window must end at T");
  if (static_cast<int>(battery_window.size()) != num_batteries)
    throw InstanceError("battery_window size mismatch");
  for (int j = 0; j < num_batteries; ++j)
    if (battery_window[j] < 0 || battery_window[j] >= num_windows)
      throw InstanceError("battery " + std::to_string(j + 1) +
                          " has an out-of-range window");
  if (static_cast<int>(demand_hours.size()) != num_batteries)
    throw InstanceError("demand size mismatch");
  for (int j = 0; j < num_batteries; ++j) {
    if (demand_hours[j] < 1)
      throw InstanceError("battery " + std::to_string(j + 1) +
                          " has nonpositive demand");
    if (demand_hours[j] > horizon_of(j))
      throw InstanceError("battery " + std::to_string(j + 1) +
                          " demands more hours than its window allows");
  }
  if (static_cast<int>(price.size()) != num_periods)
    throw InstanceError("price size mismatch");
  for (double c : price)
    if (!(c > 0.0)) throw InstanceError("prices must be positive");
  if (!(alpha > 0.0) || alpha > 1.0) throw InstanceError("alpha must be in (0,1]");
  if (gamma < 0) throw InstanceError("gamma must be nonnegative");
}

Schedule Schedule::zeros(const Instance& inst) {
  Schedule s;
  s.x.assign(inst.x_size(), 0);
  s.y.assign(inst.y_size(), 0);
  return s;
}

double augmentation_weight(const Instance& inst) {
  double cmin = inst.min_price();
  return cmin / ((inst.num_periods - 1) * static_cast<double>(inst.gamma) + 1.0);
}

ObjectiveValue evaluate_objective(const Instance& inst, const Schedule& sched) {
  ObjectiveValue v;
  for (int j = 0; j < inst.num_batteries; ++j) {
    int n = inst.horizon_of(j);
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t <= n; ++t)
        if (sched.x[inst.xidx(j, k, t)]) v.electricity_cost += inst.price[t - 1];
  }
  for (std::uint8_t b : sched.y) v.switch_count += b;
  v.scalarized = v.electricity_cost + augmentation_weight(inst) * v.switch_count;
  return v;
}

std::vector<std::uint8_t> derive_switches(const Instance& inst,
                                          const std::vector<std::uint8_t>& x) {
  std::vector<std::uint8_t> y(inst.y_size(), 0);
  for (int k = 0; k < inst.num_ports; ++k)
    for (int t = 1; t < inst.num_periods; ++t) {
      for (int j = 0; j < inst.num_batteries; ++j) {
        std::uint8_t a = x[inst.xidx(j, k, t)];
        std::uint8_t b = x[inst.xidx(j, k, t + 1)];
        if (a != b) {
          y[inst.yidx(k, t)] = 1;
          break;
        }
      }
    }
  return y;
}

FeasibilityReport check_feasible(const Instance& inst, const Schedule& sched) {
  FeasibilityReport rep;
  const int B = inst.num_batteries, N = inst.num_ports, T = inst.num_periods;
  auto x = [&](int j, int k, int t) -> int {
    if (t < 1 || t > T) return 0;
    return sched.x[inst.xidx(j, k, t)];
  };
  auto add = [&](const char* c, std::vector<int> idx) {
    rep.feasible = false;
    rep.violations.push_back({c, std::move(idx)});
  };

  // (2b)/(2c): delivered hours within the battery's window.
  for (int j = 0; j < B; ++j) {
    int n = inst.horizon_of(j);
    long got = 0;
    for (int k = 0; k < N; ++k)
      for (int t = 1; t <= n; ++t) got += x(j, k, t);
    if (inst.in_last_window(j)) {
      if (got < inst.required_hours(j)) add("2b", {j + 1});
    } else {
      if (got != inst.demand_hours[j]) add("2c", {j + 1});
    }
  }
  // No charging past the battery's window.
  for (int j = 0; j < B; ++j) {
    int n = inst.horizon_of(j);
    for (int k = 0; k < N; ++k)
      for (int t = n + 1; t <= T; ++t)
        if (x(j, k, t)) add("2c", {j + 1, k + 1, t});
  }
  // (2d): at most one battery per port-period.
  for (int k = 0; k < N; ++k)
    for (int t = 1; t <= T; ++t) {
      int occ = 0;
      for (int j = 0; j < B; ++j) occ += x(j, k, t);
      if (occ > 1) add("2d", {k + 1, t});
    }
  // (2e): a battery sits on at most one port at a time.
  for (int j = 0; j < B; ++j)
    for (int t = 1; t <= inst.horizon_of(j); ++t) {
      int on = 0;
      for (int k = 0; k < N; ++k) on += x(j, k, t);
      if (on > 1) add("2e", {j + 1, t});
    }
  // (2f)/(2g): y must cover both load and unload events.
  for (int k = 0; k < N; ++k)
    for (int t = 1; t < T; ++t) {
      int y = sched.y[inst.yidx(k, t)];
      int now = 0, next = 0;
      for (int j = 0; j < B; ++j) {
        now += x(j, k, t);
        next += x(j, k, t + 1);
      }
      if (next - now > y) add("2f", {k + 1, t});
      for (int j = 0; j < B; ++j)
        if (x(j, k, t) - x(j, k, t + 1) > y) {
          add("2g", {j + 1, k + 1, t});
          break;
        }
    }
  // (2h): gamma cap on simultaneous switches.
  for (int t = 1; t < T; ++t) {
    int tot = 0;
    for (int k = 0; k < N; ++k) tot += sched.y[inst.yidx(k, t)];
    if (tot > inst.gamma) add("2h", {t});
  }
  return rep;
}

// ---- JSON I/O ----

using nlohmann::json;

Instance load_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("not valid JSON: ") + e.what());
  }
  auto need = [&](const char* key) -> const json& {
    if (!doc.contains(key)) throw ParseError(std::string("missing key: ") + key);
    return doc.at(key);
  };
  Instance inst;
  try {
    inst.num_batteries = need("B").get<int>();
    inst.num_ports = need("N").get<int>();
    inst.num_periods = need("T").get<int>();
    inst.num_windows = need("L").get<int>();
    inst.window_end = need("window_end").get<std::vector<int>>();
    inst.battery_window = need("battery_window").get<std::vector<int>>();
    inst.demand_hours = need("p").get<std::vector<int>>();
    inst.price = need("c").get<std::vector<double>>();
    inst.alpha = need("alpha").get<double>();
    inst.gamma = need("gamma").get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad field type: ") + e.what());
  }
  try {
    inst.validate();
  } catch (const InstanceError& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
  return inst;
}

std::string save_instance(const Instance& inst) {
  json doc;
  doc["B"] = inst.num_batteries;
  doc["N"] = inst.num_ports;
  doc["T"] = inst.num_periods;
  doc["L"] = inst.num_windows;
  doc["window_end"] = inst.window_end;
  doc["battery_window"] = inst.battery_window;
  doc["p"] = inst.demand_hours;
  doc["c"] = inst.price;
  doc["alpha"] = inst.alpha;
  doc["gamma"] = inst.gamma;
  return doc.dump(2) + "\n";
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_instance(ss.str());
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << save_instance(inst);
}

// ---- generation ----

namespace {

// Hour-of-day reference prices (ore per 100 Wh), 24 entries each.
const double kBase24[24] = {34, 32, 30, 29, 30, 36, 58, 90, 84, 70, 60, 54,
                            50, 48, 47, 49, 54, 63, 75, 88, 80, 64, 48, 38};
const double kExtended24[24] = {34, 32, 30, 29, 30, 36, 58, 90, 84, 72, 64, 60,
                                62, 68, 72, 76, 80, 84, 86, 88, 82, 66, 48, 38};
const double kPlan1_24[24] = {62, 62, 62, 62, 62, 62, 62, 62, 62, 62, 62, 62,
                              62, 62, 62, 62, 62, 62, 62, 62, 62, 62, 62, 62};
const double kPlan2_24[24] = {45, 45, 45, 45, 45, 45, 58, 58, 58, 58, 58, 58,
                              58, 58, 58, 58, 58, 58, 58, 58, 58, 58, 45, 45};

}  // namespace

std::vector<double> price_profile(const std::string& name, int T) {
  const double* base = nullptr;
  if (name == "base") base = kBase24;
  else if (name == "extended") base = kExtended24;
  else if (name == "plan1") base = kPlan1_24;
  else if (name == "plan2") base = kPlan2_24;
  else throw InstanceError("unknown price profile: " + name);
  std::vector<double> c(T);
  for (int t = 1; t <= T; ++t) {
    int h = static_cast<int>(std::ceil(t * 24.0 / T));
    c[t - 1] = base[std::clamp(h, 1, 24) - 1];
  }
  return c;
}

Instance generate_instance(const GeneratorOptions& opt) {
  if (opt.num_batteries < 1 || opt.num_ports < 1)
    throw InstanceError("generator needs B >= 1 and N >= 1");
  Instance inst;
  inst.num_batteries = opt.num_batteries;
  inst.num_ports = opt.num_ports;
  inst.num_periods = opt.num_periods;
  inst.num_windows = opt.num_windows;
  inst.alpha = opt.alpha;
  inst.gamma = opt.gamma;

  const int T = opt.num_periods, L = opt.num_windows;
  inst.window_end.resize(L);
  if (L == 3 && T >= 3) {
    // Day shape: deadlines in the early afternoon, evening, and end of day.
    inst.window_end[0] = static_cast<int>(std::ceil(14.0 * T / 24.0));
    inst.window_end[1] = static_cast<int>(std::ceil(19.0 * T / 24.0));
    inst.window_end[2] = T;
  } else {
    for (int l = 0; l < L; ++l)
      inst.window_end[l] = static_cast<int>(std::ceil((l + 1) * double(T) / L));
  }
  for (int l = 1; l < L; ++l)
    if (inst.window_end[l] <= inst.window_end[l - 1])
      throw InstanceError("degenerate window layout; raise T or lower L");

  std::vector<double> shares = opt.window_shares;
  if (shares.empty()) {
    if (L == 3) shares = {0.40, 0.35, 0.25};
    else shares.assign(L, 1.0 / L);
  }
  if (static_cast<int>(shares.size()) != L)
    throw InstanceError("window_shares size mismatch");

  // Largest-remainder split of B across windows.
  std::vector<int> count(L, 0);
  {
    double tot = 0;
    for (double s : shares) tot += s;
    int assigned = 0;
    std::vector<std::pair<double, int>> rem;
    for (int l = 0; l < L; ++l) {
      double exact = opt.num_batteries * shares[l] / tot;
      count[l] = static_cast<int>(exact);
      assigned += count[l];
      rem.push_back({exact - count[l], l});
    }
    std::stable_sort(rem.begin(), rem.end(),
                     [](auto& a, auto& b) { return a.first > b.first; });
    for (int i = 0; i < opt.num_batteries - assigned; ++i)
      count[rem[i % L].second]++;
  }
  inst.battery_window.clear();
  for (int l = 0; l < L; ++l)
    inst.battery_window.insert(inst.battery_window.end(), count[l], l);

  if (!opt.explicit_prices.empty()) {
    if (static_cast<int>(opt.explicit_prices.size()) != T)
      throw InstanceError("explicit price vector has wrong length");
    inst.price = opt.explicit_prices;
  } else {
    inst.price = price_profile(opt.price_profile, T);
  }

  std::mt19937 rng(opt.seed);
  bool ok = false;
  for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
    inst.demand_hours.resize(opt.num_batteries);
    for (int j = 0; j < opt.num_batteries; ++j) {
      int hi = std::min(opt.max_demand, inst.horizon_of(j));
      std::uniform_int_distribution<int> d(1, hi);
      inst.demand_hours[j] = d(rng);
    }
    // Port-hour capacity check, cumulative per deadline.
    ok = true;
    long req = 0;
    for (int l = 0; l < L && ok; ++l) {
      for (int j = 0; j < opt.num_batteries; ++j)
        if (inst.battery_window[j] == l) req += inst.required_hours(j);
      if (req > static_cast<long>(opt.num_ports) * inst.window_end[l]) ok = false;
    }
  }
  if (!ok)
    throw InstanceError("could not draw a capacity-feasible demand vector; "
                        "too few ports for this battery mix");
  inst.validate();
  return inst;
}

}  // namespace swapsched
