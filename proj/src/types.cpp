#include "nlfv/types.hpp"

namespace nlfv {

std::string to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "zero";
}

std::string to_string(InterfaceRule r) {
  switch (r) {
    case InterfaceRule::Left:
      return "left";
    case InterfaceRule::Right:
      return "right";
    case InterfaceRule::Mean:
      break;
  }
  return "mean";
}

std::string to_string(ConvolutionMode m) {
  switch (m) {
    case ConvolutionMode::Direct:
      return "direct";
    case ConvolutionMode::Fft:
      return "fft";
    case ConvolutionMode::Auto:
      break;
  }
  return "auto";
}

Boundary parse_boundary(const std::string& s) {
  if (s == "zero" || s == "zero-extension") return Boundary::ZeroExtension;
  if (s == "periodic") return Boundary::Periodic;
  throw ConfigError("unknown boundary '" + s + "'; valid choices: zero periodic");
}

InterfaceRule parse_interface_rule(const std::string& s) {
  if (s == "left") return InterfaceRule::Left;
  if (s == "right") return InterfaceRule::Right;
  if (s == "mean") return InterfaceRule::Mean;
  throw ConfigError("unknown interface rule '" + s + "'; valid choices: left right mean");
}

ConvolutionMode parse_convolution_mode(const std::string& s) {
  if (s == "direct") return ConvolutionMode::Direct;
  if (s == "fft") return ConvolutionMode::Fft;
  if (s == "auto") return ConvolutionMode::Auto;
  throw ConfigError("unknown convolution mode '" + s + "'; valid choices: direct fft auto");
}

}  // namespace nlfv
