#pragma once

#include <string>
#include <string_view>

namespace fmeval {

// Lowercase hex SHA-256. Cache keys and report provenance both rely on this
// being stable across platforms and runs.
std::string sha256_hex(std::string_view data);

}  // namespace fmeval
