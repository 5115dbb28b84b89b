#include "ctfa/error.hpp"

namespace ctfa {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionError: return "DimensionError";
        case ErrorKind::ZeroVarianceColumn: return "ZeroVarianceColumn";
        case ErrorKind::EmptyGrid: return "EmptyGrid";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::DegenerateBaseline: return "DegenerateBaseline";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::InfeasibleScheme: return "InfeasibleScheme";
        case ErrorKind::NegativeErrorVariance: return "NegativeErrorVariance";
        case ErrorKind::NoCandidates: return "NoCandidates";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

}  // namespace ctfa
