#pragma once

#include "fracdiff/config.hpp"

namespace fracdiff {

// Solves the scalar relaxation problem and writes relax.csv to the output
// directory.
int run_relax(const RunConfig& config);

// Solves the mode-space diffusion problem; writes modes.csv, meta.json and,
// when snapshot times are configured, one synthesized field per snapshot.
int run_solve(const RunConfig& config);

// Runs the configured verification checks and writes report.json and
// report.txt. Returns 0 when every check passes or is vacuous, 1 otherwise.
int run_verify(const RunConfig& config);

// Probes the kernel admissibility conditions and prints a JSON report to
// stdout. Returns 0 when nothing failed (with a warning on stderr if a probe
// was inconclusive), 1 otherwise.
int run_admissible(const RunConfig& config);

} // namespace fracdiff
