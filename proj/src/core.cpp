#include "portphase/core.hpp"

namespace portphase {

const char* error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotSectorial: return "NotSectorial";
    case ErrorCode::NotSemiSectorial: return "NotSemiSectorial";
    case ErrorCode::IllDefined: return "IllDefined";
    case ErrorCode::SingularPivot: return "SingularPivot";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::HullTooWide: return "HullTooWide";
    case ErrorCode::Overlap: return "Overlap";
    case ErrorCode::NoValidSign: return "NoValidSign";
    case ErrorCode::InvalidConfluence: return "InvalidConfluence";
    case ErrorCode::RankDeficientParameter: return "RankDeficientParameter";
    case ErrorCode::NotExists: return "NotExists";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace portphase
