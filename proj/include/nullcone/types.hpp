#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace nullcone {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Index = Eigen::Index;

inline constexpr Real kPi = 3.14159265358979323846264338327950288;

/// Input outside a model's radial domain or an invalid argument combination.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A numeric guard tripped (aliasing, positivity, step-size, spectrum gap).
struct NumericGuardError : std::runtime_error {
    explicit NumericGuardError(const std::string& guard, const std::string& what)
        : std::runtime_error(guard + ": " + what), guard_name(guard) {}
    std::string guard_name;
};

/// Malformed file or command-line input.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nullcone
