#pragma once

#include <string>
#include <vector>

#include "pebble/decomposition.hpp"
#include "pebble/instances.hpp"
#include "pebble/schedule.hpp"
#include "pebble/vendor_json.hpp"

namespace pebble {

// Edge-list format: one `src dst` pair per line, `#` comments, names are
// arbitrary non-whitespace tokens; a line with a single token declares an
// isolated vertex. A leading `digraph` selects the DOT subset instead
// (`a -> b;` edge statements and bare node statements; attributes ignored).
// Ids are assigned densely in first-appearance order.
NamedDag parse_dag(const std::string& text);

std::string emit_edge_list(const NamedDag& g);

// Schedule text: one move per line, `P <v>`, `S <u> <v>`, `R <v>`.
std::string format_schedule(const Schedule& schedule, const std::vector<std::string>& names,
                            std::uint64_t cap = 10'000'000);
Schedule parse_schedule(const std::string& text, const NamedDag& g);

nlohmann::json metrics_to_json(const PebbleMetrics& metrics, const std::vector<std::string>& names);
nlohmann::json decomposition_to_json(const BudgetDecomposition& decomp,
                                     const std::vector<std::string>& names);

}  // namespace pebble
