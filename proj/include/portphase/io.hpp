#pragma once

#include <string>
#include <vector>

#include "portphase/confluence.hpp"
#include "portphase/network.hpp"

namespace portphase {

// Shortest decimal that round-trips, capped at 12 significant digits.
std::string format_real(double x);
// "a+bi" / "a-bi".
std::string format_complex(cplx z);
cplx parse_complex(const std::string& text);

std::vector<CMatrix> parse_matrices(const std::string& text);
std::string matrix_to_csv(const CMatrix& M);
std::string matrices_to_csv(const std::vector<CMatrix>& Ms);

RationalMatrix parse_network_json(const std::string& text);
std::string network_to_json(const RationalMatrix& Z);

ConfluenceRep parse_confluence_json(const std::string& text);
DualRep parse_dual_json(const std::string& text);
std::string confluence_to_json(const ConfluenceRep& rep);
std::string dual_to_json(const DualRep& d);

// omega, phi_min_rad, phi_max_rad, class, detour
std::string sweep_to_csv(const SweepResult& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace portphase
