#include "fiatchain/codec.hpp"

#include <limits>

namespace fiatchain {

void Encoder::u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Encoder::bytes(ByteView v) {
    if (v.size() > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("byte string too long");
    auto len = static_cast<std::uint32_t>(v.size());
    for (int shift = 24; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(len >> shift));
    buf_.insert(buf_.end(), v.begin(), v.end());
}

void Decoder::need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw DecodeError("truncated input at offset " + std::to_string(pos_));
}

std::uint8_t Decoder::u8() {
    need(1);
    return in_[pos_++];
}

std::uint64_t Decoder::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | in_[pos_++];
    return v;
}

bool Decoder::boolean() {
    auto v = u8();
    if (v > 1) throw DecodeError("invalid boolean byte");
    return v == 1;
}

Bytes Decoder::bytes() {
    need(4);
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = len << 8 | in_[pos_++];
    need(len);
    Bytes out(in_.begin() + static_cast<std::ptrdiff_t>(pos_), in_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
    pos_ += len;
    return out;
}

std::string Decoder::str() {
    auto raw = bytes();
    return {raw.begin(), raw.end()};
}

Hash256 Decoder::hash() {
    auto raw = bytes();
    if (raw.size() != 32) throw DecodeError("digest must be 32 bytes");
    Hash256 h;
    std::copy(raw.begin(), raw.end(), h.bytes.begin());
    return h;
}

std::uint64_t Decoder::count() {
    auto n = u64();
    if (n > in_.size() - pos_) throw DecodeError("element count exceeds input");
    return n;
}

void Decoder::expect_end() const {
    if (!at_end()) throw DecodeError("trailing bytes at offset " + std::to_string(pos_));
}

}  // namespace fiatchain
