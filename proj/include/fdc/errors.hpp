#pragma once

#include <stdexcept>
#include <string>

namespace fdc {

struct BasisMismatch : std::runtime_error {
    explicit BasisMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidQuadrature : std::runtime_error {
    explicit InvalidQuadrature(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidParameter : std::runtime_error {
    explicit InvalidParameter(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fdc
