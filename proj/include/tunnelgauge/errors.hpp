#pragma once

#include <stdexcept>

namespace tunnelgauge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The stationary scattering formalism needs a propagating wave in both leads.
struct NonPropagatingLead final : Error {
  using Error::Error;
};

// Finite-difference grid violates k_max * h < 0.1.
struct GridTooCoarse final : Error {
  using Error::Error;
};

// The requested derivative method does not exist for this barrier shape.
struct MethodUnavailable final : Error {
  using Error::Error;
};

// |dT/dl| fell below the divergence threshold: transducer dead point.
struct DivergentDeltaL final : Error {
  using Error::Error;
};

// The second-order width-uncertainty quadratic has no positive real root.
struct NoPositiveRoot final : Error {
  using Error::Error;
};

// Pointwise currents are undefined exactly on a potential step.
struct AtInterface final : Error {
  using Error::Error;
};

// Unknown figure preset name.
struct UnknownPreset final : Error {
  using Error::Error;
};

}  // namespace tunnelgauge
