#pragma once

#include <stdexcept>

namespace orbits {

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ShapeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct WindingUndefined : std::domain_error {
    using std::domain_error::domain_error;
};

// loop with ||z|| = 0, outside the blown-up loop space
struct DegenerateLoop : std::domain_error {
    using std::domain_error::domain_error;
};

// collision with vanishing z', contradicts z being a nontrivial solution
struct DegenerateCollision : std::domain_error {
    using std::domain_error::domain_error;
};

// q-loop passing through the origin where a formula needs 1/|q|
struct SingularLoop : std::domain_error {
    using std::domain_error::domain_error;
};

// evaluation inside the exclusion region of a non-regularized primary
struct FieldDomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DegenerateFlow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace orbits
