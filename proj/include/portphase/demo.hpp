#pragma once

#include <string>
#include <utility>
#include <vector>

#include "portphase/connections.hpp"

namespace portphase {

// Default sweep range and density of the figure reproductions.
inline constexpr double kDemoOmegaLo = 1e-2;
inline constexpr double kDemoOmegaHi = 1e3;
inline constexpr double kDemoPointsPerDecade = 100.0;

// The two-port pair connected in the fig15 demo.
RationalMatrix demo_network_a();  // fig4_network(1, 1, 2, 1)
RationalMatrix demo_network_b();  // fig14_network(10, 0.2, 1, 0.1, 0.5)

// Connection kinds of the fig15 demo, in output order, with r = 1 for all.
std::vector<ConnectionKind> demo_connections();

SweepResult demo_connection_sweep(ConnectionKind kind);

// File name and CSV content pairs for "fig5" or "fig15".
std::vector<std::pair<std::string, std::string>> demo_files(const std::string& figure);

}  // namespace portphase
