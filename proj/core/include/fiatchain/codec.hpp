#pragma once

// Canonical binary encoding used for signing, hashing, wire messages and chain
// dumps. Integers are 8-byte big-endian, byte strings carry a 4-byte
// big-endian length prefix, enum and union tags are a single byte. The full
// layout is documented in docs/wire-format.md.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fiatchain/bytes.hpp"

namespace fiatchain {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Encoder {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u64(std::uint64_t v);
    void boolean(bool v) { u8(v ? 1 : 0); }
    void bytes(ByteView v);
    void str(std::string_view s) { bytes(as_bytes(s)); }
    void hash(const Hash256& h) { bytes(h.bytes); }

    const Bytes& data() const { return buf_; }
    Bytes take() { return std::move(buf_); }

private:
    Bytes buf_;
};

class Decoder {
public:
    explicit Decoder(ByteView in) : in_(in) {}

    std::uint8_t u8();
    std::uint64_t u64();
    bool boolean();
    Bytes bytes();
    std::string str();
    Hash256 hash();

    /// Element count for a sequence, bounded by the remaining input so a
    /// corrupt count cannot trigger a huge allocation.
    std::uint64_t count();

    bool at_end() const { return pos_ == in_.size(); }
    std::size_t position() const { return pos_; }
    void expect_end() const;

private:
    void need(std::size_t n) const;

    ByteView in_;
    std::size_t pos_ = 0;
};

}  // namespace fiatchain
