#pragma once

#include <string>

namespace rcm {

inline constexpr const char* kVersion = "0.1.0";

// Write-temp-then-rename; the destination is never observed half-written.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace rcm
