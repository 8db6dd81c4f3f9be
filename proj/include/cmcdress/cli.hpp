#pragma once

#include <iosfwd>
#include <string>

#include "cmcdress/lattice.hpp"

namespace cmcdress {

// argv-style entry point of the cmcdress binary. Returns the process exit
// code: 0 success, 1 validation error, 2 numeric failure, 3 I/O failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// JSON snapshot of a dressed lattice: constants, window, per-site frame and
// plus-factor coefficients. Problems reading a snapshot surface as IoError.
void save_lattice(const DressedLattice& lattice, const std::string& path);
DressedLattice load_lattice(const std::string& path);

// JSON snapshot of a single seed loop, rebuilt at the requested degree.
void save_seed_loop(const TwistedLoop& loop, const std::string& path);
TwistedLoop load_seed_loop(const std::string& path, int degree);

} // namespace cmcdress
