#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lstmopt/clsp.hpp"

namespace lstmopt {

// Instance JSON: {"T","d","p","f","h","cap","s0","meta":{"c_ratio","f_ratio","seed"}}.
// Emitted compact on a single line; parsing accepts any key order.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(std::string_view text);

// Solution JSON: {"x","y","s","objective","time","status",...stats}.
std::string solution_to_json(const Solution& sol, double time_field);
Solution solution_from_json(std::string_view text);

// Reads either one JSON document or a newline-delimited stream of instances.
std::vector<Instance> read_instances(std::istream& in);

}  // namespace lstmopt
