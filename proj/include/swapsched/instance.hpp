#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace swapsched {

// Problem data for one charging facility instance.
//
// Conventions: batteries j, ports k and windows l are 0-based in memory.
// Time periods are 1-based (t = 1..T) to match the file format and all
// user-facing output; tensors indexed by t store period t at offset t-1.
class Instance {
 public:
  int num_batteries = 0;  // B
  int num_ports = 0;      // N
  int num_periods = 0;    // T
  int num_windows = 0;    // L

  std::vector<int> window_end;     // per window, last period n_l (1-based)
  std::vector<int> battery_window; // per battery, 0-based window index
  std::vector<int> demand_hours;   // per battery, p_j >= 1
  std::vector<double> price;       // per period, c_t > 0 (ore per 100 Wh)
  double alpha = 1.0;              // charge fraction for the last window
  int gamma = 0;                   // switching cap per period boundary

  int window_of(int j) const { return battery_window[j]; }
  // Last usable period for battery j.
  int horizon_of(int j) const { return window_end[battery_window[j]]; }
  bool in_last_window(int j) const { return battery_window[j] == num_windows - 1; }
  // Hours battery j must receive: p_j, or ceil(alpha*p_j) in the last window.
  int required_hours(int j) const;

  // Flat offset for a (j, k, t) entry, t 1-based.
  std::size_t xidx(int j, int k, int t) const {
    return (static_cast<std::size_t>(j) * num_ports + k) * num_periods + (t - 1);
  }
  // Flat offset for a (k, t) switch entry, boundary t in 1..T-1.
  std::size_t yidx(int k, int t) const {
    return static_cast<std::size_t>(k) * (num_periods - 1) + (t - 1);
  }
  std::size_t x_size() const {
    return static_cast<std::size_t>(num_batteries) * num_ports * num_periods;
  }
  std::size_t y_size() const {
    return static_cast<std::size_t>(num_ports) * (num_periods - 1);
  }

  double min_price() const;

  // Throws InstanceError if any structural invariant fails.
  void validate() const;
};

// A candidate assignment: x over (j, k, t), y over (k, t<T). 0/1 valued.
struct Schedule {
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> y;

  static Schedule zeros(const Instance& inst);
};

struct ObjectiveValue {
  double electricity_cost = 0.0;
  long switch_count = 0;
  double scalarized = 0.0;
};

struct Violation {
  std::string constraint;   // one of "2b".."2h"
  std::vector<int> index;   // 1-based indices (battery/port/period as applicable)
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// w = min_t c_t / ((T-1)*gamma + 1): a switch-count weight small enough that
// electricity cost always dominates the scalarized objective.
double augmentation_weight(const Instance& inst);

ObjectiveValue evaluate_objective(const Instance& inst, const Schedule& sched);

// Checks (2b)-(2h); reports every violation, in constraint order.
FeasibilityReport check_feasible(const Instance& inst, const Schedule& sched);

// Componentwise-minimal y consistent with x: y_kt = 1 iff the set of
// batteries on port k changes across boundary t.
std::vector<std::uint8_t> derive_switches(const Instance& inst,
                                          const std::vector<std::uint8_t>& x);

// ---- instance I/O ----

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Instance load_instance(const std::string& text);
std::string save_instance(const Instance& inst);
Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

// ---- generation ----

struct GeneratorOptions {
  int num_batteries = 0;
  int num_ports = 0;
  int gamma = 0;
  int num_periods = 24;
  int num_windows = 3;
  std::string price_profile = "base";       // base | extended | plan1 | plan2
  std::vector<double> explicit_prices;      // overrides price_profile if set
  double alpha = 0.5;
  int max_demand = 8;                        // p_j upper bound before clipping
  std::vector<double> window_shares;         // overrides default split if set
  std::uint64_t seed = 0;
};

// Named intra-day price profile stretched/sampled to T periods.
std::vector<double> price_profile(const std::string& name, int T);

Instance generate_instance(const GeneratorOptions& opt);

}  // namespace swapsched
