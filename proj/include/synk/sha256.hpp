#pragma once
#include <string>

namespace synk {

// Hex digest of the SHA-256 hash of data.
std::string sha256_hex(const std::string& data);

}  // namespace synk
