#include "lstmopt/instance_io.hpp"

#include <istream>
#include <sstream>

#include "json_util.hpp"

namespace lstmopt {

using detail::get_field;
using detail::json;

namespace {

json numbers(const std::vector<double>& v) {
  json arr = json::array();
  for (double d : v) arr.push_back(detail::number(d));
  return arr;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r\n") == std::string::npos;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["T"] = inst.horizon();
  j["d"] = inst.demand;
  j["p"] = numbers(inst.prod_cost);
  j["f"] = numbers(inst.setup_cost);
  j["h"] = numbers(inst.hold_cost);
  j["cap"] = inst.capacity;
  j["s0"] = inst.initial_inventory;
  j["meta"] = {{"c_ratio", inst.meta.c_ratio},
               {"f_ratio", detail::number(inst.meta.f_ratio)},
               {"seed", inst.meta.seed}};
  return j.dump();
}

static Instance instance_from(const json& j) {
  Instance inst;
  const auto horizon = get_field<std::size_t>(j, "T", "instance");
  inst.demand = get_field<std::vector<long>>(j, "d", "instance");
  inst.prod_cost = get_field<std::vector<double>>(j, "p", "instance");
  inst.setup_cost = get_field<std::vector<double>>(j, "f", "instance");
  inst.hold_cost = get_field<std::vector<double>>(j, "h", "instance");
  inst.capacity = get_field<std::vector<long>>(j, "cap", "instance");
  if (j.contains("s0")) inst.initial_inventory = get_field<long>(j, "s0", "instance");
  if (auto it = j.find("meta"); it != j.end() && it->is_object()) {
    inst.meta.c_ratio = it->value("c_ratio", 0);
    inst.meta.f_ratio = it->value("f_ratio", 0.0);
    inst.meta.seed = it->value("seed", std::uint64_t{0});
  }
  if (inst.demand.size() != horizon) {
    throw FormatError("instance JSON: T does not match length of d");
  }
  try {
    inst.validate();
  } catch (const DimensionError& e) {
    throw FormatError(std::string("instance JSON: ") + e.what());
  }
  return inst;
}

Instance instance_from_json(std::string_view text) {
  return instance_from(detail::parse_json(text, "instance"));
}

std::string solution_to_json(const Solution& sol, double time_field) {
  json j;
  j["x"] = numbers(sol.x);
  j["y"] = sol.y;
  j["s"] = numbers(sol.s);
  j["objective"] = detail::number(sol.objective);
  j["time"] = detail::number(time_field);
  j["status"] = to_string(sol.status);
  return j.dump();
}

Solution solution_from_json(std::string_view text) {
  const json j = detail::parse_json(text, "solution");
  Solution sol;
  sol.x = get_field<std::vector<double>>(j, "x", "solution");
  sol.y = get_field<std::vector<int>>(j, "y", "solution");
  sol.s = get_field<std::vector<double>>(j, "s", "solution");
  sol.objective = get_field<double>(j, "objective", "solution");
  sol.stats.wall_time_seconds = j.value("time", 0.0);
  sol.status = parse_status(j.value("status", std::string("Optimal")));
  if (sol.status == SolveStatus::Optimal) sol.stats.mip_gap = 0.0;
  return sol;
}

std::vector<Instance> read_instances(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::vector<Instance> out;
  // A single pretty-printed document spans lines; try it whole first.
  try {
    const json whole = json::parse(text);
    if (whole.is_array()) {
      for (const auto& item : whole) out.push_back(instance_from(item));
    } else {
      out.push_back(instance_from(whole));
    }
    return out;
  } catch (const json::parse_error&) {
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (is_blank(line)) continue;
    out.push_back(instance_from_json(line));
  }
  return out;
}

}  // namespace lstmopt
