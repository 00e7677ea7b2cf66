#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace beamres {

// Bad input: CLI maps these to exit status 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical breakdown: CLI maps these to exit status 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveCoefficient : InputError { using InputError::InputError; };
struct BoundaryConstraintViolated : InputError { using InputError::InputError; };
struct InsufficientSmoothness : InputError { using InputError::InputError; };
struct KTooSmall : InputError { using InputError::InputError; };
struct ZeroJump : InputError { using InputError::InputError; };

struct NoConvergence : NumericalError {
    std::complex<double> last, previous;
    NoConvergence(const std::string& what, std::complex<double> a, std::complex<double> b)
        : NumericalError(what), last(a), previous(b) {}
};
struct ZeroOnContour : NumericalError { using NumericalError::NumericalError; };
struct PhaseJump : NumericalError { using NumericalError::NumericalError; };
struct SingularAtResonance : NumericalError { using NumericalError::NumericalError; };
struct IncompleteZeroSet : NumericalError { using NumericalError::NumericalError; };
struct OdeFailure : NumericalError { using NumericalError::NumericalError; };

}  // namespace beamres
