#pragma once

#include <string>
#include <vector>

#include "swapsched/driver.hpp"
#include "swapsched/instance.hpp"

namespace swapsched {

// Maximal run of one battery on one port. Ports, batteries and periods are
// 1-based here and in every emitted file; end is inclusive.
struct GanttSegment {
  int port = 0;
  int start = 0;
  int end = 0;
  int battery = 0;
  int window = 0;
};

// Segments per port in (port, start) order.
std::vector<GanttSegment> schedule_segments(const Instance& inst,
                                            const Schedule& sched);

// Rows (port, start_period, end_period, battery) plus a trailing summary
// comment with the objective breakdown.
std::string schedule_csv(const Instance& inst, const Schedule& sched);

// Inverse of schedule_csv; y is re-derived from the loaded x.
Schedule load_schedule_csv(const Instance& inst, const std::string& text);

// Columns elapsed_s, iter, h_upper, h_lower, source.
std::string trace_csv(const std::vector<TraceEvent>& trace);

// Run summary as a JSON document.
std::string result_json(const Instance& inst, const SolveResult& res);

// Standalone SVG: one lane per port, one rect per segment, color class by
// demand window, price strip and objective summary in the header.
std::string gantt_svg(const Instance& inst, const Schedule& sched);

}  // namespace swapsched
