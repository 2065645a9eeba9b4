#include "swapsched/dual.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace swapsched {

std::vector<double> subgradient(const std::vector<std::uint8_t>& x_star,
                                const std::vector<std::uint8_t>& s_star) {
  std::vector<double> g(x_star.size(), 0.0);
  for (std::size_t q = 0; q < g.size(); ++q)
    g[q] = static_cast<double>(x_star[q]) - static_cast<double>(s_star[q]);
  return g;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<double> mds_direction(const std::vector<double>& g,
                                  DirectionState& state) {
  double gg = dot(g, g);
  double dd = state.present ? dot(state.d_prev, state.d_prev) : 0.0;
  std::vector<double> d = g;
  if (state.present && dd > 0 && gg > 0) {
    double gd = dot(g, state.d_prev);
    double cosine = gd / std::sqrt(gg * dd);
    double alpha = std::max(0.0, -cosine);
    double zeta = 1.0 / (2.0 - alpha);
    double y_mgt = std::max(0.0, zeta * gd / dd);
    double y_ads = std::sqrt(gg / dd);
    double y_mds = (1.0 - alpha) * y_mgt + alpha * y_ads;
    for (std::size_t i = 0; i < d.size(); ++i)
      d[i] += y_mds * state.d_prev[i];
  }
  state.d_prev = d;
  state.present = true;
  return d;
}

double polyak_step(double theta, double h_bar, double h_mu,
                   const std::vector<double>& d) {
  double tau = theta * (h_bar - h_mu) / dot(d, d);
  return std::max(tau, 1e-8);
}

RegressionFit fit_regression(const Instance& inst,
                             const std::vector<double>& mu) {
  RegressionFit fit;
  fit.per_window.resize(inst.num_windows);
  for (int l = 0; l < inst.num_windows; ++l) {
    double sx = 0, sy = 0;
    long n = 0;
    for (int j = 0; j < inst.num_batteries; ++j) {
      if (inst.battery_window[j] != l) continue;
      for (int k = 0; k < inst.num_ports; ++k)
        for (int t = 1; t <= inst.window_end[l]; ++t) {
          sx += inst.price[t - 1];
          sy += mu[inst.xidx(j, k, t)];
          ++n;
        }
    }
    WindowFit& wf = fit.per_window[l];
    if (n == 0) continue;
    double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int j = 0; j < inst.num_batteries; ++j) {
      if (inst.battery_window[j] != l) continue;
      for (int k = 0; k < inst.num_ports; ++k)
        for (int t = 1; t <= inst.window_end[l]; ++t) {
          double dx = inst.price[t - 1] - mx;
          double dy = mu[inst.xidx(j, k, t)] - my;
          sxx += dx * dx;
          sxy += dx * dy;
          syy += dy * dy;
        }
    }
    if (sxx <= 1e-12) {
      wf.intercept = my;
      continue;
    }
    wf.slope = sxy / sxx;
    wf.intercept = my - wf.slope * mx;
    if (syy > 1e-12) {
      double sse = syy - sxy * sxy / sxx;
      wf.r_squared = std::min(1.0, std::max(0.0, 1.0 - sse / syy));
    }
  }
  return fit;
}

std::vector<double> warm_start_multipliers(const Instance& inst,
                                           const RegressionFit& fit) {
  std::vector<double> mu(inst.x_size(), 0.0);
  for (int j = 0; j < inst.num_batteries; ++j) {
    const WindowFit& wf = fit.per_window[inst.battery_window[j]];
    for (int k = 0; k < inst.num_ports; ++k)
      for (int t = 1; t <= inst.horizon_of(j); ++t)
        mu[inst.xidx(j, k, t)] = wf.slope * inst.price[t - 1] + wf.intercept;
  }
  return mu;
}

std::vector<double> plain_update(const std::vector<double>& mu, double tau,
                                 const std::vector<double>& d) {
  std::vector<double> out = mu;
  for (std::size_t q = 0; q < out.size(); ++q) out[q] += tau * d[q];
  return out;
}

std::vector<double> projected_update(const Instance& inst,
                                     const std::vector<double>& mu, double tau,
                                     const std::vector<double>& g) {
  std::vector<double> mid = plain_update(mu, tau, g);
  return warm_start_multipliers(inst, fit_regression(inst, mid));
}

FitDocument load_fit(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  FitDocument out;
  for (const auto& w : doc.at("windows")) {
    WindowFit wf;
    wf.slope = w.at("slope").get<double>();
    wf.intercept = w.at("intercept").get<double>();
    wf.r_squared = w.at("r_squared").get<double>();
    out.fit.per_window.push_back(wf);
  }
  const auto& src = doc.at("source");
  out.source_batteries = src.at("B").get<int>();
  out.source_ports = src.at("N").get<int>();
  out.source_gamma = src.at("gamma").get<int>();
  out.source_periods = src.at("T").get<int>();
  out.iterations = src.at("iterations").get<int>();
  return out;
}

std::string save_fit(const FitDocument& doc) {
  nlohmann::json j;
  j["windows"] = nlohmann::json::array();
  for (const WindowFit& wf : doc.fit.per_window)
    j["windows"].push_back({{"slope", wf.slope},
                            {"intercept", wf.intercept},
                            {"r_squared", wf.r_squared}});
  j["source"] = {{"B", doc.source_batteries},
                 {"N", doc.source_ports},
                 {"gamma", doc.source_gamma},
                 {"T", doc.source_periods},
                 {"iterations", doc.iterations}};
  return j.dump(2) + "\n";
}

FitDocument load_fit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fit file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_fit(ss.str());
}

void save_fit_file(const FitDocument& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write fit file: " + path);
  out << save_fit(doc);
}

}  // namespace swapsched
