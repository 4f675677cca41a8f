#pragma once

#include <stdexcept>
#include <string>

namespace latmove {

// Input and usage errors (bad files, bad arguments, stale moves).
// The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace latmove
