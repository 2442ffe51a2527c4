#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fiatchain {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
std::optional<Bytes> from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

/// 32-byte SHA-256 digest.
struct Hash256 {
    std::array<std::uint8_t, 32> bytes{};

    bool is_zero() const;
    std::string hex() const { return to_hex(bytes); }
    static std::optional<Hash256> from_hex(std::string_view hex);

    auto operator<=>(const Hash256&) const = default;
};

Hash256 sha256(ByteView data);

}  // namespace fiatchain
