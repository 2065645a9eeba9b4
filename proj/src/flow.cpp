#include "swapsched/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace swapsched {

namespace {
constexpr double kScale = 1e6;
constexpr std::int64_t kInfCost = std::numeric_limits<std::int64_t>::max() / 4;
}  // namespace

int FlowSubproblem::add_arc(int from, int to, int cap, std::int64_t cost) {
  int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, cap, cost});
  arcs_.push_back({from, 0, -cost});
  adj_[from].push_back(id);
  adj_[to].push_back(id + 1);
  return id;
}

FlowSubproblem::FlowSubproblem(const Instance& inst, double beta)
    : inst_(inst), beta_(beta) {
  const int B = inst.num_batteries, N = inst.num_ports, T = inst.num_periods;
  // Node layout: 0 source, then batteries, then slots (j,t), then (k,t), sink.
  source_ = 0;
  int next = 1;
  std::vector<int> battery_node(B), slot_base(B);
  for (int j = 0; j < B; ++j) battery_node[j] = next++;
  for (int j = 0; j < B; ++j) {
    slot_base[j] = next;
    next += inst.horizon_of(j);
  }
  int port_base = next;
  next += N * T;
  sink_ = next++;
  num_nodes_ = next;
  adj_.resize(num_nodes_);
  mu_.assign(inst.x_size(), 0.0);
  middle_arc_.assign(inst.x_size(), -1);

  for (int j = 0; j < B; ++j) {
    int n = inst.horizon_of(j);
    int supply = inst.in_last_window(j) ? T : inst.demand_hours[j];
    total_supply_ += supply;
    add_arc(source_, battery_node[j], supply, 0);
    if (inst.in_last_window(j))
      add_arc(battery_node[j], sink_, T - inst.required_hours(j), 0);
    for (int t = 1; t <= n; ++t) {
      int slot = slot_base[j] + (t - 1);
      add_arc(battery_node[j], slot, 1, 0);
      for (int k = 0; k < N; ++k)
        middle_arc_[inst.xidx(j, k, t)] =
            add_arc(slot, port_base + k * T + (t - 1), 1, 0);
    }
  }
  for (int k = 0; k < N; ++k)
    for (int t = 1; t <= T; ++t)
      add_arc(port_base + k * T + (t - 1), sink_, 1, 0);
}

void FlowSubproblem::update_costs(const std::vector<double>& mu) {
  if (mu.size() != mu_.size())
    throw FlowError("multiplier tensor has the wrong size");
  mu_ = mu;
  for (int j = 0; j < inst_.num_batteries; ++j) {
    int n = inst_.horizon_of(j);
    for (int k = 0; k < inst_.num_ports; ++k)
      for (int t = 1; t <= n; ++t) {
        std::size_t q = inst_.xidx(j, k, t);
        double raw = beta_ * inst_.price[t - 1] + mu_[q];
        std::int64_t c =
            static_cast<std::int64_t>(std::nearbyint(raw * kScale));
        arcs_[middle_arc_[q]].cost = c;
        arcs_[middle_arc_[q] ^ 1].cost = -c;
      }
  }
}

XSolution FlowSubproblem::solve() {
  for (Arc& a : arcs_) a.flow = 0;
  const std::int64_t INF = kInfCost;
  std::vector<std::int64_t> pi(num_nodes_, 0), dist(num_nodes_);
  std::vector<int> pre_arc(num_nodes_);

  // Initial potentials: shortest distances on the empty-residual DAG. Node
  // ids are already topologically ordered (source < batteries < slots <
  // ports < sink), so one forward sweep settles them despite negative costs.
  {
    std::vector<std::int64_t> d(num_nodes_, INF);
    d[source_] = 0;
    for (int u = 0; u < num_nodes_; ++u) {
      if (d[u] >= INF) continue;
      for (int id : adj_[u])
        if (arcs_[id].cap > 0)
          d[arcs_[id].head] = std::min(d[arcs_[id].head], d[u] + arcs_[id].cost);
    }
    for (int u = 0; u < num_nodes_; ++u) pi[u] = d[u] >= INF ? 0 : d[u];
  }

  int routed = 0;
  using HE = std::pair<std::int64_t, int>;
  while (routed < total_supply_) {
    std::fill(dist.begin(), dist.end(), INF);
    std::priority_queue<HE, std::vector<HE>, std::greater<HE>> heap;
    dist[source_] = 0;
    heap.push({0, source_});
    while (!heap.empty()) {
      auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (int id : adj_[u]) {
        const Arc& a = arcs_[id];
        if (a.cap - a.flow <= 0) continue;
        std::int64_t nd = d + a.cost + pi[u] - pi[a.head];
        if (nd < dist[a.head]) {
          dist[a.head] = nd;
          pre_arc[a.head] = id;
          heap.push({nd, a.head});
        }
      }
    }
    if (dist[sink_] >= INF)
      throw FlowError("instance cannot deliver the demanded charge hours: "
                      "not enough port capacity inside the windows");
    for (int u = 0; u < num_nodes_; ++u)
      pi[u] += std::min(dist[u], dist[sink_]);
    // Augment along the path by its bottleneck.
    int push = total_supply_ - routed;
    for (int u = sink_; u != source_; u = arcs_[pre_arc[u] ^ 1].head)
      push = std::min(push, arcs_[pre_arc[u]].cap - arcs_[pre_arc[u]].flow);
    for (int u = sink_; u != source_; u = arcs_[pre_arc[u] ^ 1].head) {
      arcs_[pre_arc[u]].flow += push;
      arcs_[pre_arc[u] ^ 1].flow -= push;
    }
    routed += push;
  }

  XSolution out;
  out.x.assign(inst_.x_size(), 0);
  for (std::size_t q = 0; q < middle_arc_.size(); ++q)
    if (middle_arc_[q] >= 0 && arcs_[middle_arc_[q]].flow > 0) out.x[q] = 1;
  out.value = 0;
  for (int j = 0; j < inst_.num_batteries; ++j)
    for (int k = 0; k < inst_.num_ports; ++k)
      for (int t = 1; t <= inst_.horizon_of(j); ++t) {
        std::size_t q = inst_.xidx(j, k, t);
        if (out.x[q]) out.value += beta_ * inst_.price[t - 1] + mu_[q];
      }
  return out;
}

XSolution solve_x_subproblem(const Instance& inst, const std::vector<double>& mu,
                             double beta) {
  FlowSubproblem fp(inst, beta);
  fp.update_costs(mu);
  return fp.solve();
}

}  // namespace swapsched
