#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace nlfv {

/// Cell averages or interface values along one axis.
using Vector = Eigen::ArrayXd;

/// Two-dimensional cell array, indexed (i, j) = (x index, y index).
using Array2 = Eigen::ArrayXXd;

enum class Boundary { ZeroExtension, Periodic };

/// Convex combination used for the interface value u_{p+1/2} that enters the
/// convolution.
enum class InterfaceRule { Left, Right, Mean };

enum class ConvolutionMode { Direct, Fft, Auto };

enum class Axis { X, Y };

/// Malformed or inconsistent user input (config files, CLI flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (mismatched meshes, non-nested
/// grids, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The time loop produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, long step, long cell)
      : std::runtime_error(what), step_(step), cell_(cell) {}
  long step() const noexcept { return step_; }
  long cell() const noexcept { return cell_; }

 private:
  long step_;
  long cell_;
};

inline double reconstruct(InterfaceRule rule, double left, double right) {
  switch (rule) {
    case InterfaceRule::Left:
      return left;
    case InterfaceRule::Right:
      return right;
    case InterfaceRule::Mean:
      break;
  }
  return 0.5 * (left + right);
}

std::string to_string(Boundary b);
std::string to_string(InterfaceRule r);
std::string to_string(ConvolutionMode m);

Boundary parse_boundary(const std::string& s);
InterfaceRule parse_interface_rule(const std::string& s);
ConvolutionMode parse_convolution_mode(const std::string& s);

}  // namespace nlfv
