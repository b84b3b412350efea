#include "sil/error.hpp"

namespace sil {

const char* error_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::OutsideHalfTubes: return "OutsideHalfTubes";
    case ErrorCode::OutsideTube: return "OutsideTube";
    case ErrorCode::NotOnManifold: return "NotOnManifold";
    case ErrorCode::NegativeArgument: return "NegativeArgument";
    case ErrorCode::NearKink: return "NearKink";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EndpointSingularity: return "EndpointSingularity";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::EndpointOffManifold: return "EndpointOffManifold";
    case ErrorCode::AtCenter: return "AtCenter";
    case ErrorCode::SampleOutsideTube: return "SampleOutsideTube";
    case ErrorCode::InsideCollar: return "InsideCollar";
    case ErrorCode::OutsideDomainOfSide: return "OutsideDomainOfSide";
    case ErrorCode::CollarTooWide: return "CollarTooWide";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::ExtinctionReached: return "ExtinctionReached";
    case ErrorCode::DataCorrupt: return "DataCorrupt";
    case ErrorCode::TooFewRecords: return "TooFewRecords";
    case ErrorCode::EmptyLevelSet: return "EmptyLevelSet";
    case ErrorCode::TraceOffManifoldTube: return "TraceOffManifoldTube";
    case ErrorCode::BoundaryNode: return "BoundaryNode";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code)
{
}

}  // namespace sil
