#pragma once

#include <optional>
#include <string>

#include "portphase/network.hpp"

namespace portphase {

enum class ConnectionKind { Shorted, Open, Series, Parallel, Hybrid, Cascade, CascadeLoad, HybridCascade };

const char* connection_name(ConnectionKind k);
std::optional<ConnectionKind> parse_connection(const std::string& name);

CMatrix shorted(const CMatrix& Za, int r, double tol = kDefaultSchurTol);
CMatrix open_ports(const CMatrix& Za, int r);
CMatrix series(const CMatrix& Za, const CMatrix& Zb);
CMatrix parallel(const CMatrix& Za, const CMatrix& Zb, double tol = kDefaultSchurTol);
// Za, Zb n x n; the leading r ports are in series, the trailing n - r in parallel.
CMatrix hybrid(const CMatrix& Za, const CMatrix& Zb, int r, double tol = kDefaultSchurTol);
// Za (r+s)^2, Zb (s+t)^2; output (r+t)^2.
CMatrix cascade(const CMatrix& Za, const CMatrix& Zb, int r, double tol = kDefaultSchurTol);
CMatrix cascade_load(const CMatrix& Za, int r, const CMatrix& Zload, double tol = kDefaultSchurTol);
// Za (r+s)^2, Zb (s+r)^2; output (2r)^2.
CMatrix hybrid_cascade(const CMatrix& Za, const CMatrix& Zb, int r, double tol = kDefaultSchurTol);

// Dispatch. Shorted and Open ignore Zb; CascadeLoad uses Zb as the load.
CMatrix connect(ConnectionKind kind, const CMatrix& Za, const CMatrix& Zb, int r, double tol = kDefaultSchurTol);

// Augmented matrices whose Schur complement w.r.t. the trailing block gives the connection.
struct Augmented {
    CMatrix M;
    int keep = 0;
};
Augmented hybrid_augmented(const CMatrix& Za, const CMatrix& Zb, int r);
Augmented cascade_augmented(const CMatrix& Za, const CMatrix& Zb, int r);
Augmented hybrid_cascade_augmented(const CMatrix& Za, const CMatrix& Zb, int r);

PhaseInterval predict_interval(const PhaseInterval& Ja, const PhaseInterval& Jb);

// Per-frequency connection of two networks on a common grid.
SweepResult connect_sweep(ConnectionKind kind, const RationalMatrix& Za, const RationalMatrix& Zb, int r,
                          const FrequencyGrid& grid, double tol = kDefaultSectorTol);

// Closed-form network connections (polynomial arithmetic only).
RationalMatrix series_exact(const RationalMatrix& Za, const RationalMatrix& Zb);
RationalMatrix parallel_exact_scalar(const RationalMatrix& Za, const RationalMatrix& Zb);

}  // namespace portphase
