#pragma once

#include <optional>
#include <string>

#include "portphase/phase.hpp"

namespace portphase {

enum class SubtractionKind { Series, Parallel, Hybrid, Cascade, HybridCascade };

const char* subtraction_name(SubtractionKind k);
std::optional<SubtractionKind> parse_subtraction(const std::string& name);

inline constexpr double kPivotCondLimit = 1e12;

CMatrix series_sub(const CMatrix& Zc, const CMatrix& Zb);
CMatrix parallel_sub(const CMatrix& Zc, const CMatrix& Zb);
CMatrix hybrid_sub(const CMatrix& Zc, const CMatrix& Zb, int r);
// Zc (r+t)^2, Zb (s+t)^2; returns Zx (r+s)^2. A true inverse of cascade when s = t.
CMatrix cascade_sub(const CMatrix& Zc, const CMatrix& Zb, int r);
// Zc (2r)^2, Zb (s+r)^2; returns Zx (r+s)^2. A true inverse of hybrid_cascade when s = r.
CMatrix hybrid_cascade_sub(const CMatrix& Zc, const CMatrix& Zb, int r);

CMatrix subtract(SubtractionKind kind, const CMatrix& Zc, const CMatrix& Zb, int r);

PhaseInterval predict_subtraction_interval(const PhaseInterval& Jc, const PhaseInterval& Jb);

}  // namespace portphase
