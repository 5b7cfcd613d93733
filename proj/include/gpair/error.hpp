#pragma once

#include <stdexcept>
#include <string>

namespace gpair {

/// Bad parameter or inconsistent shapes passed to a library call.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A voxel center coincides with a detector (r_ij == 0), which the point model cannot represent.
class GeometryConflict : public std::runtime_error {
public:
    GeometryConflict(std::size_t voxel, std::size_t detector)
        : std::runtime_error("geometry conflict: voxel " + std::to_string(voxel) +
                             " coincides with detector " + std::to_string(detector)),
          voxel_(voxel), detector_(detector) {}

    std::size_t voxel() const noexcept { return voxel_; }
    std::size_t detector() const noexcept { return detector_; }

private:
    std::size_t voxel_;
    std::size_t detector_;
};

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite value encountered during reconstruction.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, long iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}

    long iteration() const noexcept { return iteration_; }

private:
    long iteration_;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidArgument(msg);
}

} // namespace detail
} // namespace gpair
