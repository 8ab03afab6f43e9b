#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace promptgen {

/// Reads a whole file into a string. Throws MalformedFileError if the file
/// cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes bytes to a file, creating parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view content);

/// Runs fn(0..count-1) on up to max_in_flight worker threads. Blocks until
/// all indices are done; rethrows the first exception raised by any worker.
void parallel_for_indexed(std::size_t count, int max_in_flight,
                          const std::function<void(std::size_t)>& fn);

} // namespace promptgen
