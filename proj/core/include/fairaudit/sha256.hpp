#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fairaudit {

/// SHA-256 of a byte string, as a lowercase hex digest. Used by the CLI to
/// fingerprint configs and output artifacts in run manifests.
std::string sha256_hex(std::string_view bytes);

}  // namespace fairaudit
