#pragma once

#include <stdexcept>
#include <string>

namespace sil {

enum class ErrorCode {
    OutsideHalfTubes,
    OutsideTube,
    NotOnManifold,
    NegativeArgument,
    NearKink,
    QuadratureFailure,
    EndpointSingularity,
    NoConvergence,
    EndpointOffManifold,
    AtCenter,
    SampleOutsideTube,
    InsideCollar,
    OutsideDomainOfSide,
    CollarTooWide,
    StabilityViolation,
    ExtinctionReached,
    DataCorrupt,
    TooFewRecords,
    EmptyLevelSet,
    TraceOffManifoldTube,
    BoundaryNode,
    ConfigInvalid,
};

const char* error_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sil
