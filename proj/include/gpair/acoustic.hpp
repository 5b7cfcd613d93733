#pragma once

#include <cstdint>

#include "gpair/error.hpp"
#include "gpair/geometry_types.hpp"

namespace gpair {

/// Homogeneous-medium acquisition parameters.
struct AcousticConfig {
    double speed_of_sound = 1500.0; // m/s
    double sampling_rate = 20e6;    // Hz
    std::int64_t n_samples = 1024;  // samples per trace
    double t0 = 0.0;                // time of sample 0, s

    double dt() const { return 1.0 / sampling_rate; }
    double time(std::int64_t n) const { return t0 + static_cast<double>(n) * dt(); }

    void validate() const {
        detail::require(speed_of_sound > 0.0, "speed of sound must be positive");
        detail::require(sampling_rate > 0.0, "sampling rate must be positive");
        detail::require(n_samples >= 1, "at least one sample per trace is required");
    }
};

using AcquisitionConfig = AcousticConfig;

/// Isotropic Gaussian emitter A * exp(-|r - center|^2 / (2 sigma^2)).
struct GaussianSource {
    Vec3 center;
    double amplitude = 1.0;
    double sigma = 1e-4;
};

} // namespace gpair
