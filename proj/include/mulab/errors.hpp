#pragma once

#include <stdexcept>
#include <string>

namespace mulab {

// Every failure surfaced by the library carries a stable kind tag
// (e.g. "NotOrdinary", "PrecisionInsufficient") so callers and tests can
// branch on it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

}  // namespace mulab
