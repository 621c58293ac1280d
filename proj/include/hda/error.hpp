#pragma once

#include <stdexcept>
#include <string>

namespace hda {

// Raised when an input violates a documented precondition or invariant.
class invalid_input : public std::invalid_argument {
public:
    explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Raised by queueing models when utilization reaches or exceeds 1.
class saturation_error : public std::domain_error {
public:
    explicit saturation_error(const std::string& what) : std::domain_error(what) {}
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw invalid_input(what);
}

}  // namespace hda
