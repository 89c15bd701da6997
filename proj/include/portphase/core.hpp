#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace portphase {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorCode {
    InvalidArgument = 1,
    DimMismatch,
    NotSectorial,
    NotSemiSectorial,
    IllDefined,
    SingularPivot,
    PoleHit,
    InvalidRange,
    HullTooWide,
    Overlap,
    NoValidSign,
    InvalidConfluence,
    RankDeficientParameter,
    NotExists,
    InvalidInterval,
    Parse,
    Io,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Shorthand for throwing with a code.
[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace portphase
