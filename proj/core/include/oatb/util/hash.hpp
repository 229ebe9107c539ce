#pragma once

#include <cstddef>
#include <string>

namespace oatb::util {

// Lowercase hex SHA-256 digest of a byte buffer.
std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(const std::string& data);

// Streaming digest of a file's contents. Throws std::runtime_error on I/O failure.
std::string sha256_file(const std::string& path);

}  // namespace oatb::util
