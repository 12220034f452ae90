#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace utsarjan {

/// 128-bit random identifier, lowercase hex (32 chars).
std::string random_id();

/// Session-grade random token, `bytes` of entropy rendered lowercase hex.
std::string random_token(std::size_t bytes = 32);

/// Uniform integer in [0, upper).
std::uint32_t random_below(std::uint32_t upper);

std::string sha256_hex(std::span<const std::uint8_t> data);
std::string sha256_hex(std::string_view text);

/// Equality without early exit on the first differing byte.
bool constant_time_equal(std::string_view a, std::string_view b);

std::string base64_encode(std::span<const std::uint8_t> data);
/// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view text);

}  // namespace utsarjan
