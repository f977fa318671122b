#pragma once

#include <stdexcept>
#include <string>

namespace persona {

// Bad user input (missing file, malformed record, invalid config value).
// The CLI maps this to exit code 2; anything else exits 1.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace persona
