#pragma once

#include <stdexcept>
#include <string>

namespace beamfamily {

/// Invalid argument or violated precondition.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The beam polynomial has a root at zero or infinity (w_1 or w_M vanishes),
/// so the flip map x -> 1/conj(x) is undefined.
class DegenerateEndpoints : public DomainError {
public:
    using DomainError::DomainError;
};

class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class AmbiguousDesign : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FamilyTooLarge : public DomainError {
public:
    using DomainError::DomainError;
};

/// Malformed input document (beam vector, family or design spec file).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace beamfamily
