#pragma once

#include <stdexcept>
#include <string>

namespace slmfg {

/// Raised by every solver module on contract violations or non-finite data.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slmfg
