#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "sbm/types.hpp"

namespace sbm::cli {

struct RunConfig {
  enum class Command { Gt, Pt, Sweep, Verify };
  enum class Format { Csv, Json };

  Command command = Command::Gt;
  BathParameters params;
  CorrelationModel model;         // correlation variant for gt and pt
  bool markov = false;            // pt: closed-form rate trace instead of the solver
  std::optional<SweepGrid> grid;  // sweep only
  double t_max = 20.0;
  std::size_t steps = 400;        // gt rows and closed-form pt rows; the
                                  // solver emits its own grid
  std::optional<double> step;     // pt solver step override
  Format format = Format::Csv;
  std::string output_path;        // empty writes to stdout
  std::string gnuplot_path;       // sweep: optional extra slice export
  bool progress = false;          // sweep: cell completion on stderr
};

// Maps a command-line model name (full, f3, f3b, st, matsubara, zerot,
// zerotcrit) to the variant; empty when unknown.
std::optional<CorrelationModel::Variant> variant_from_name(
    const std::string& name);

// Executes one command. Success returns 0 and writes the payload to the
// configured destination. A failure prints a one-line machine-readable error
// record to stderr and returns the exit status: 2 for invalid requests, 3
// for numerical failures, 4 for I/O.
int run(const RunConfig& config);

// Cross-check table behind the verify command; returns 0 when every row
// passes, otherwise 3.
int verify(std::ostream& out);

}  // namespace sbm::cli
