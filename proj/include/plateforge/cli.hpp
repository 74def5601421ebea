#ifndef PLATEFORGE_CLI_HPP
#define PLATEFORGE_CLI_HPP

#include <span>
#include <string>
#include <vector>

#include "plateforge/grid.hpp"
#include "plateforge/optimize.hpp"

namespace plateforge::cli {

// Exit codes: 0 success, 2 configuration error, 3 solver non-convergence.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);  // args without the program name

// 8-bit binary PGM (P5), linear min-max scaling; exterior pixels are black.
void write_pgm_field(const Grid& grid, std::span<const double> values, const std::string& path);

// S rendered 0/255 with tie cells at 128.
void write_pgm_indicator(const Grid& grid, const Indicator& indicator, const std::string& path);

}  // namespace plateforge::cli

#endif
