#pragma once

// JSON reports and the sweep CSV.

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "curvkit/verifier.hpp"

namespace curvkit {

nlohmann::ordered_json to_json(const InequalityReport& report);
nlohmann::ordered_json to_json(const std::vector<InequalityReport>& reports);
nlohmann::ordered_json to_json(const TaxonomyReport& report);

/// Header t,ratio_i,ratio_ii,ricci_min,weyl_l2,verdict; empty cells for
/// undefined ratios, verdict "excluded" for rows that lost Ricci positivity.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

/// Writes `text` to `path`, or to stdout when path is "-".
void write_output(const std::string& path, const std::string& text);

/// Exit status for a set of verdicts: 3 if any violated, else 2 if any
/// inconclusive, else 0.
int exit_code_for(const std::vector<Verdict>& verdicts);

}  // namespace curvkit
