#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swapsched/instance.hpp"

namespace swapsched {

// Copy-constraint residual x* - s*, the raw subgradient.
std::vector<double> subgradient(const std::vector<std::uint8_t>& x_star,
                                const std::vector<std::uint8_t>& s_star);

// Deflected direction d = g + Y*d_prev blending the momentum-style and
// adaptive weights by the angle between g and the previous direction.
struct DirectionState {
  std::vector<double> d_prev;
  bool present = false;
};

std::vector<double> mds_direction(const std::vector<double>& g,
                                  DirectionState& state);

// tau = theta * (h_bar - h_mu) / ||d||^2, floored at 1e-8.
double polyak_step(double theta, double h_bar, double h_mu,
                   const std::vector<double>& d);

struct WindowFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct RegressionFit {
  std::vector<WindowFit> per_window;
};

// Least squares of mu_jkt against the price c_t, pooled per demand window.
RegressionFit fit_regression(const Instance& inst,
                             const std::vector<double>& mu);

// mu0_jkt = slope_l * c_t + intercept_l.
std::vector<double> warm_start_multipliers(const Instance& inst,
                                           const RegressionFit& fit);

std::vector<double> plain_update(const std::vector<double>& mu, double tau,
                                 const std::vector<double>& d);

// Intermediate step mu + tau*g, then replaced by its own per-window fit
// evaluated on the prices.
std::vector<double> projected_update(const Instance& inst,
                                     const std::vector<double>& mu, double tau,
                                     const std::vector<double>& g);

// Learned-fit data file with provenance.
struct FitDocument {
  RegressionFit fit;
  int source_batteries = 0;
  int source_ports = 0;
  int source_gamma = 0;
  int source_periods = 0;
  int iterations = 0;
};

FitDocument load_fit(const std::string& text);
std::string save_fit(const FitDocument& doc);
FitDocument load_fit_file(const std::string& path);
void save_fit_file(const FitDocument& doc, const std::string& path);

}  // namespace swapsched
