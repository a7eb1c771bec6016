#pragma once

#include <filesystem>
#include <fstream>
#include <string>

namespace vrlab::csv {

/// Creates parent directories; throws vrlab::Error if the file cannot be opened.
std::ofstream open_output(const std::filesystem::path& path);

/// 17 significant digits, enough to round-trip a double.
std::string format(double v);

}  // namespace vrlab::csv
