#pragma once

#include <string>
#include <vector>

namespace sdde {

// Deterministic SVG rendering of the CSV outputs: one means-vs-time
// panel per (psi, dt) with one polyline per initial, and one ECDF panel
// per (psi, dt). Returns the written file paths. ParseError (with line
// numbers) on malformed input; an input with no data rows is an error,
// not an empty plot.
std::vector<std::string> emit_means_plots(const std::string& means_csv,
                                          const std::string& out_dir);
std::vector<std::string> emit_ecdf_plots(const std::string& ecdf_csv,
                                         const std::string& out_dir);

}  // namespace sdde
