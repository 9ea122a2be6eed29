#pragma once

#include <string>

namespace torusmin {

// Write-temp-then-rename so readers never observe a partial file.
void writeFileAtomic(const std::string& path, const std::string& content);

std::string readFile(const std::string& path);

}  // namespace torusmin
