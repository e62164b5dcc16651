#pragma once

#include <stdexcept>
#include <string>

namespace psmp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// construction / arithmetic
struct EmptyCoefficients : Error { using Error::Error; };
struct PivotalZeroLead : Error { using Error::Error; };
struct InvalidBound : Error { using Error::Error; };
struct InconsistentRepresentations : Error { using Error::Error; };
struct NotPivotal : Error { using Error::Error; };
struct EmptySequence : Error { using Error::Error; };
struct DeltaTooLarge : Error { using Error::Error; };
struct NonpositiveEpsilon : Error { using Error::Error; };

// model / pipeline
struct EmptySubset : Error { using Error::Error; };
struct SingleState : Error { using Error::Error; };
struct BadPermutation : Error { using Error::Error; };
struct SameState : Error { using Error::Error; };
struct EpsilonOutOfRange : Error { using Error::Error; };
struct SingularSystem : Error { using Error::Error; };

// files
struct ParseError : Error { using Error::Error; };
struct IOError : Error { using Error::Error; };

}  // namespace psmp
