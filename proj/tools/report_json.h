#ifndef DSIM_TOOLS_REPORT_JSON_H_
#define DSIM_TOOLS_REPORT_JSON_H_

#include <string>

#include "dsim/selection.h"
#include "json.hpp"

namespace dsim::tools {

using Json = nlohmann::ordered_json;

// Key sets are fixed; see docs/formats.md.
Json SelectionReportToJson(const SelectionReport& report);
Json UnionSelectionToJson(const UnionSelection& selection, double gamma);

// Shortest decimal that round-trips the double.
std::string FormatExact(double value);
// Six decimals, for human-facing output.
std::string FormatFixed6(double value);

}  // namespace dsim::tools

#endif  // DSIM_TOOLS_REPORT_JSON_H_
