#ifndef LANDAU_TYPES_HPP
#define LANDAU_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace landau {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;

using Cloud = std::vector<Vec3>;

// Invalid user input or configuration (bad spec, unsampleable model, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A model lacks an access path that an operation needs (e.g. Hessians).
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Quadrature box captures too little of the density's mass.
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every pair of a cloud is (numerically) coincident.
class DegenerateCloudError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrationBlowup : public std::runtime_error {
 public:
  IntegrationBlowup(std::int64_t step, const std::string& what)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
        step_(step) {}
  std::int64_t step() const noexcept { return step_; }

 private:
  std::int64_t step_;
};

}  // namespace landau

#endif  // LANDAU_TYPES_HPP
