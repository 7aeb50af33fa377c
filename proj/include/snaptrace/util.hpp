#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace snaptrace {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

inline Timestamp from_millis(std::int64_t ms) { return Timestamp{std::chrono::milliseconds{ms}}; }
inline std::int64_t to_millis(Timestamp t) { return t.time_since_epoch().count(); }
Timestamp system_now();

/// Lowercase hex SHA-256 of the given bytes.
std::string sha256_hex(std::string_view bytes);

std::string to_hex(std::string_view bytes);

/// `count` bytes from the OS CSPRNG, hex-encoded (2*count characters).
std::string random_hex(std::size_t count);

std::string base64_encode(std::string_view bytes);
/// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view text);

/// Splits on '\n'; a trailing newline does not produce an empty final line.
std::vector<std::string_view> split_lines(std::string_view text);

}  // namespace snaptrace
