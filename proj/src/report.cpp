#include "swapsched/report.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>

namespace swapsched {

namespace {

int occupant(const Instance& inst, const Schedule& sched, int k, int t) {
  for (int j = 0; j < inst.num_batteries; ++j)
    if (inst.horizon_of(j) >= t && sched.x[inst.xidx(j, k, t)]) return j;
  return -1;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::vector<GanttSegment> schedule_segments(const Instance& inst,
                                            const Schedule& sched) {
  std::vector<GanttSegment> segs;
  for (int k = 0; k < inst.num_ports; ++k) {
    int t = 1;
    while (t <= inst.num_periods) {
      int j = occupant(inst, sched, k, t);
      if (j < 0) {
        ++t;
        continue;
      }
      int end = t;
      while (end < inst.num_periods && occupant(inst, sched, k, end + 1) == j)
        ++end;
      segs.push_back({k + 1, t, end, j + 1, inst.window_of(j) + 1});
      t = end + 1;
    }
  }
  return segs;
}

std::string schedule_csv(const Instance& inst, const Schedule& sched) {
  std::ostringstream os;
  os << "port,start_period,end_period,battery\n";
  for (const GanttSegment& s : schedule_segments(inst, sched))
    os << s.port << ',' << s.start << ',' << s.end << ',' << s.battery << '\n';
  ObjectiveValue val = evaluate_objective(inst, sched);
  os << "# electricity_cost=" << fmt(val.electricity_cost)
     << ",switch_count=" << val.switch_count
     << ",scalarized=" << fmt(val.scalarized) << '\n';
  return os.str();
}

Schedule load_schedule_csv(const Instance& inst, const std::string& text) {
  Schedule sched = Schedule::zeros(inst);
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("port,", 0) == 0)
      continue;
    std::istringstream row(line);
    int port, start, end, battery;
    char c1, c2, c3;
    if (!(row >> port >> c1 >> start >> c2 >> end >> c3 >> battery) ||
        c1 != ',' || c2 != ',' || c3 != ',')
      throw ParseError("bad schedule row: " + line);
    if (port < 1 || port > inst.num_ports || battery < 1 ||
        battery > inst.num_batteries || start < 1 || end < start ||
        end > inst.num_periods)
      throw ParseError("schedule row out of range: " + line);
    for (int t = start; t <= end; ++t)
      sched.x[inst.xidx(battery - 1, port - 1, t)] = 1;
  }
  sched.y = derive_switches(inst, sched.x);
  return sched;
}

std::string trace_csv(const std::vector<TraceEvent>& trace) {
  std::ostringstream os;
  os << "elapsed_s,iter,h_upper,h_lower,source\n";
  for (const TraceEvent& e : trace)
    os << fmt(e.elapsed_seconds) << ',' << e.iteration << ','
       << fmt(e.h_upper) << ',' << fmt(e.h_lower) << ',' << e.source << '\n';
  return os.str();
}

std::string result_json(const Instance& inst, const SolveResult& res) {
  nlohmann::ordered_json doc;
  doc["variation"] = res.variation;
  doc["termination"] = res.termination;
  doc["iterations"] = res.iterations;
  doc["has_schedule"] = res.has_schedule;
  if (res.has_schedule) {
    doc["electricity_cost"] = res.value.electricity_cost;
    doc["switch_count"] = res.value.switch_count;
    doc["scalarized"] = res.value.scalarized;
    doc["h_upper"] = res.h_upper;
  }
  if (std::isfinite(res.h_lower)) doc["h_lower"] = res.h_lower;
  doc["gap"] = res.gap;
  doc["batteries"] = inst.num_batteries;
  doc["ports"] = inst.num_ports;
  doc["periods"] = inst.num_periods;
  return doc.dump(2) + "\n";
}

std::string gantt_svg(const Instance& inst, const Schedule& sched) {
  // fixed palette per demand window, cycled past three windows
  static const char* kColors[] = {"#4c72b0", "#55a868", "#c44e52",
                                  "#8172b2", "#ccb974", "#64b5cd"};
  const int cell = 28, lane = 22, left = 60, top = 70;
  const int width = left + inst.num_periods * cell + 20;
  const int height = top + inst.num_ports * lane + 30;
  ObjectiveValue val = evaluate_objective(inst, sched);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "  <text x=\"8\" y=\"18\" font-size=\"13\">electricity cost "
     << fmt(val.electricity_cost) << ", switchings " << val.switch_count << "</text>\n";
  os << "  <text x=\"8\" y=\"36\" font-size=\"11\">prices";
  for (double c : inst.price) os << ' ' << fmt(c);
  os << "</text>\n";
  for (int t = 1; t <= inst.num_periods; ++t)
    os << "  <text x=\"" << left + (t - 1) * cell + cell / 2 - 4
       << "\" y=\"" << top - 8 << "\" font-size=\"10\">" << t << "</text>\n";
  for (int k = 1; k <= inst.num_ports; ++k)
    os << "  <text x=\"8\" y=\"" << top + (k - 1) * lane + 15
       << "\" font-size=\"10\">port " << k << "</text>\n";
  for (const GanttSegment& s : schedule_segments(inst, sched)) {
    int x = left + (s.start - 1) * cell;
    int y = top + (s.port - 1) * lane;
    int w = (s.end - s.start + 1) * cell;
    os << "  <rect class=\"seg\" x=\"" << x << "\" y=\"" << y << "\" width=\""
       << w << "\" height=\"" << lane - 4 << "\" fill=\""
       << kColors[(s.window - 1) % 6] << "\" stroke=\"#333\"/>\n";
    os << "  <text x=\"" << x + 4 << "\" y=\"" << y + 13
       << "\" font-size=\"10\">" << s.battery << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace swapsched
