#pragma once

#include <map>
#include <string>

#include "shearspec/run.hpp"

namespace shearspec {

/// Gnuplot-ready whitespace-separated data for a report:
///   boundary.dat    x f(x) f(x)+d
///   separators.dat  x_ext y_ext x_int y_int (bracket reports; one segment
///                   per block)
///   bands.dat       xi xi^2 analytic numeric, one block per band, rows
///                   ordered by xi^2
///   ladder.dat      index eigenvalue threshold
///   convergence.dat L lambda1
/// Blocks are separated by two blank lines (gnuplot `index`).
std::map<std::string, std::string> plotdata_files(const RunReport& report);

/// Writes plotdata_files(report) into `dir`.
void emit_plotdata(const RunReport& report, const std::string& dir);

}  // namespace shearspec
