#pragma once

#include <string>

#include "sbm/types.hpp"

namespace sbm::map_io {

// Stable palette index used by the gnuplot export, matching classification
// precedence: Markov 0, ShortTime 1, F3b 2, F3 3, FullRequired 4.
int label_index(const std::string& label);

// Serialization is canonical: re-reading a serialized map and serializing it
// again reproduces the text byte for byte.
std::string to_json(const ValidityMap& m);
ValidityMap from_json(const std::string& text);

// One row per cell, doubles in 17-significant-digit scientific notation,
// flags joined into one quoted column.
std::string to_csv(const ValidityMap& m);

// One block per beta slice, blocks two blank lines apart so a slice is
// addressable with gnuplot `index`. Rows are (gamma, kappa, label index)
// with a blank line between gamma groups for grid plotting.
std::string to_gnuplot(const ValidityMap& m);

std::string load(const std::string& path);
void save(const std::string& text, const std::string& path);

}  // namespace sbm::map_io
