#pragma once

#include <functional>

#include "sbm/types.hpp"

namespace sbm::mapper {

// Smallest final time from the ladder {20, 40, ..., 1280}/v whose full-model
// population trace varies over the last tenth of the window by less than
// `threshold` times its total variation. Returns the ladder top with the
// saturated flag set when no rung settles; an undamped cosine (kappa = 0)
// never does. A rung whose solve trips the instability guard counts as
// unsettled; if every rung trips it the last error propagates.
TfChoice choose_tf(const BathParameters& p, double threshold = 0.01);

// L2 relative deviation between two traces, both linearly resampled onto
// `samples` uniform points covering the common window. The traces must span
// the same interval; anything beyond one part in 1e6 of disagreement between
// their endpoints is a MismatchError.
double relative_error(const PopulationTrace& app, const PopulationTrace& full,
                      std::size_t samples = 1000);

// Full reference trace plus the four approximants at one parameter point.
// The label is the first entry of (Markov, ShortTime, F3b, F3) whose relative
// error beats grid.eps_fine, else FullRequired; every error is recorded.
// Near-critical cells (|gamma - w0| < 1e-6 w0) take the Matsubara form as the
// reference. kappa = 0 short-circuits: all retained kernels coincide at
// G = 0, so ShortTime wins with zero error and the Markov column is skipped
// (its rate shape is undefined there). A failed approximant lands in flags
// and drops out of the label race instead of aborting the cell.
ValidityCell classify_cell(const BathParameters& p, const SweepGrid& grid);

// Called after each finished cell with (done, total). Under the parallel
// driver events can arrive out of order; `done` is the count at event time.
using Progress = std::function<void(std::size_t done, std::size_t total)>;

// Cartesian sweep over gamma x kappa x beta at fixed w0 with v = 1, p0 = 1,
// cells row-major over (gamma, kappa, beta). Cells are independent; the
// parallel driver distributes them over an OpenMP pool and writes by index,
// so the result is identical to the serial reference. A cell failure is
// recorded in that cell's flags (label FullRequired) and never aborts the
// sweep.
ValidityMap sweep(const SweepGrid& grid, const Progress& progress = {});
ValidityMap sweep_serial(const SweepGrid& grid, const Progress& progress = {});

}  // namespace sbm::mapper
