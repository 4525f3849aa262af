#pragma once

#include <stdexcept>
#include <string>

namespace rfit {

// Bad user input: malformed files, out-of-range arguments, mismatched shapes.
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A requested certificate could not be produced: verification found a defect.
struct certification_error : std::runtime_error {
    explicit certification_error(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration refused to proceed: the group closure exceeded the element cap.
struct cap_exceeded_error : validation_error {
    explicit cap_exceeded_error(const std::string& what) : validation_error(what) {}
};

}  // namespace rfit
