// errors.hpp: exception hierarchy shared by every module

#pragma once

#include <stdexcept>
#include <string>

namespace tridecoh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// linalg
struct NonHermitianInput : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// model / leakage
struct InvalidParams : Error { using Error::Error; };
struct CutoffTooSmall : Error { using Error::Error; };
struct DegenerateFit : Error { using Error::Error; };

// bath
struct QuadratureNoConvergence : Error { using Error::Error; };

// evolution
struct GridMiss : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };

// scenario / cli
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct UnknownFigure : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace tridecoh
