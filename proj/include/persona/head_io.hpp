#pragma once

#include <string>

#include "persona/head.hpp"

namespace persona {

// Binary checkpoint: header (magic, version, config), parameter tensors in
// the shared visit order, trailing checksum. Round-trips params bitwise.
void save_head(const HeadParams& params, const std::string& path);
HeadParams load_head(const std::string& path);

}  // namespace persona
