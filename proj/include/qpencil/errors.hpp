#pragma once

#include <stdexcept>
#include <string>

namespace qp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// pencil_core
struct UnrecognizedProfile : Error { using Error::Error; };

// uniformization
struct BranchPole : Error { using Error::Error; };

// charts
struct ChartDegenerate : Error { using Error::Error; };
struct OnBaseQuadric : Error { using Error::Error; };
struct InfiniteLambda : Error { using Error::Error; };

// qrt
struct Indeterminate : Error { using Error::Error; };
struct RootPairMismatch : Error { using Error::Error; };
struct ProbeFailed : Error { using Error::Error; };

// deformation
struct OffPencilFiber : Error { using Error::Error; };
struct CollapsedImage : Error { using Error::Error; };

// families
struct ConstraintViolated : Error { using Error::Error; };
struct DegenerateParameter : Error { using Error::Error; };
struct LiftInconsistent : Error { using Error::Error; };

// engine
struct NotSymmetric : Error { using Error::Error; };
struct PrecisionExhausted : Error { using Error::Error; };

struct StageError : Error {
    std::string stage;
    StageError(const std::string& stage_, const std::string& cause)
        : Error("stage " + stage_ + ": " + cause), stage(stage_) {}
};

}  // namespace qp
