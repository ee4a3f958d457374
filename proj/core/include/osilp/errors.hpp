#pragma once
#include <stdexcept>
#include <string>

namespace osilp {

// Bad configuration or precondition violation caused by user input.
// The CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Inconsistent vector/matrix dimensions. Also exit code 2.
struct dim_error : config_error {
    explicit dim_error(const std::string& msg) : config_error(msg) {}
};

// A numerical routine failed to converge or produced non-finite results
// where finite ones are required. The CLI maps this to exit code 3.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace osilp
