#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "swapsched/report.hpp"
#include "test_util.hpp"

using namespace swapsched;

namespace {

// Minimal well-formedness scan: prolog, matched tags, quoted attributes.
bool well_formed_xml(const std::string& doc) {
  std::vector<std::string> stack;
  std::size_t i = doc.find("?>");
  if (doc.rfind("<?xml", 0) != 0 || i == std::string::npos) return false;
  i += 2;
  while (i < doc.size()) {
    if (doc[i] != '<') {
      if (doc[i] == '>') return false;
      ++i;
      continue;
    }
    std::size_t close = i;
    bool quoted = false;
    char quote = 0;
    while (++close < doc.size()) {
      char c = doc[close];
      if (quoted) {
        if (c == quote) quoted = false;
      } else if (c == '"' || c == '\'') {
        quoted = true;
        quote = c;
      } else if (c == '>') {
        break;
      } else if (c == '<') {
        return false;
      }
    }
    if (close >= doc.size() || quoted) return false;
    std::string tag = doc.substr(i + 1, close - i - 1);
    if (tag.empty()) return false;
    if (tag[0] == '/') {
      if (stack.empty()) return false;
      if (stack.back() != tag.substr(1)) return false;
      stack.pop_back();
    } else if (tag.back() != '/') {
      stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
    }
    i = close + 1;
  }
  return stack.empty();
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = text.find(needle); p != std::string::npos;
       p = text.find(needle, p + needle.size()))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("segments tile the occupied slots in order") {
  Instance inst = testutil::showcase_instance();
  Schedule sched = testutil::showcase_improved(inst);
  std::vector<GanttSegment> segs = schedule_segments(inst, sched);
  REQUIRE(!segs.empty());
  long covered = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const GanttSegment& s = segs[i];
    CHECK(s.start <= s.end);
    CHECK(s.window == inst.window_of(s.battery - 1) + 1);
    covered += s.end - s.start + 1;
    if (i > 0 && segs[i - 1].port == s.port)
      CHECK(segs[i - 1].end < s.start);
    if (i > 0) CHECK(segs[i - 1].port <= s.port);
    for (int t = s.start; t <= s.end; ++t)
      CHECK(sched.x[inst.xidx(s.battery - 1, s.port - 1, t)] == 1);
  }
  long ones = 0;
  for (auto v : sched.x) ones += v;
  CHECK(covered == ones);
}

TEST_CASE("schedule csv round trips and stays feasible") {
  Instance inst = testutil::showcase_instance();
  Schedule sched = testutil::showcase_incumbent(inst);
  std::string csv = schedule_csv(inst, sched);
  CHECK(csv.rfind("port,start_period,end_period,battery\n", 0) == 0);
  CHECK(csv.find("# electricity_cost=") != std::string::npos);

  Schedule back = load_schedule_csv(inst, csv);
  CHECK(back.x == sched.x);
  CHECK(back.y == derive_switches(inst, sched.x));
  CHECK(check_feasible(inst, back).feasible);
}

TEST_CASE("schedule csv rejects malformed rows") {
  Instance inst = testutil::showcase_instance();
  CHECK_THROWS_AS(load_schedule_csv(inst, "1,2,3\n"), ParseError);
  CHECK_THROWS_AS(load_schedule_csv(inst, "9,1,2,1\n"), ParseError);
  CHECK_THROWS_AS(load_schedule_csv(inst, "1,4,2,1\n"), ParseError);
}

TEST_CASE("trace csv lists one row per event") {
  std::vector<TraceEvent> trace = {{0.5, 0, 100.0, 60.0, "heuristic"},
                                   {1.25, 3, 95.0, 70.0, "dual"}};
  std::string csv = trace_csv(trace);
  CHECK(csv.rfind("elapsed_s,iter,h_upper,h_lower,source\n", 0) == 0);
  CHECK(count_of(csv, "\n") == 3);
  CHECK(csv.find("1.25,3,95,70,dual") != std::string::npos);
}

TEST_CASE("result json carries the summary fields") {
  Instance inst = testutil::showcase_instance();
  SolveResult res;
  res.variation = 13;
  res.termination = "gap";
  res.iterations = 42;
  res.has_schedule = true;
  res.schedule = testutil::showcase_improved(inst);
  res.value = evaluate_objective(inst, res.schedule);
  res.h_upper = res.value.scalarized;
  res.h_lower = res.value.scalarized * 0.95;
  res.gap = 0.05;

  nlohmann::json doc = nlohmann::json::parse(result_json(inst, res));
  CHECK(doc["variation"] == 13);
  CHECK(doc["gap"] == doctest::Approx(0.05));
  CHECK(doc["electricity_cost"] == doctest::Approx(res.value.electricity_cost));
  CHECK(doc["switch_count"] == res.value.switch_count);
  CHECK(doc["ports"] == inst.num_ports);
}

TEST_CASE("gantt svg is well formed with one rect per segment") {
  Instance inst = testutil::showcase_instance();
  Schedule sched = testutil::showcase_improved(inst);
  std::string svg = gantt_svg(inst, sched);
  CHECK(well_formed_xml(svg));
  CHECK(svg.find("xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
  CHECK(count_of(svg, "<rect class=\"seg\"") ==
        schedule_segments(inst, sched).size());
  CHECK(svg.find("electricity cost") != std::string::npos);
  CHECK(svg.find("prices") != std::string::npos);
}

TEST_CASE("gantt geometry is linear in port and period") {
  Instance inst = testutil::showcase_instance();
  Schedule a = testutil::schedule_from_ports(inst, {{1, 1, 0, 0, 0},
                                                    {0, 0, 0, 0, 0},
                                                    {2, 2, 0, 0, 0},
                                                    {0, 0, 5, 5, 5}});
  std::string svg = gantt_svg(inst, a);
  // three segments: ports 1, 3, 4 starting at periods 1, 1, 3
  std::size_t p1 = svg.find("<rect class=\"seg\"");
  std::size_t p2 = svg.find("<rect class=\"seg\"", p1 + 1);
  std::size_t p3 = svg.find("<rect class=\"seg\"", p2 + 1);
  REQUIRE(p3 != std::string::npos);
  auto attr = [&](std::size_t pos, const std::string& name) {
    std::size_t a0 = svg.find(name + "=\"", pos) + name.size() + 2;
    return std::stoi(svg.substr(a0, svg.find('"', a0) - a0));
  };
  int x1 = attr(p1, "x"), x3 = attr(p3, "x");
  int y1 = attr(p1, "y"), y2 = attr(p2, "y"), y3 = attr(p3, "y");
  CHECK(x3 - x1 == 2 * (attr(p1, "width") / 2));  // two periods over
  CHECK(y2 - y1 == 2 * (y3 - y2));  // lanes 1 -> 3 -> 4 evenly spaced
}
