#pragma once

#include <cstdint>
#include <string_view>

#include "fiatchain/bytes.hpp"
#include "fiatchain/codec.hpp"

namespace fiatchain {

// Signatures are detached and always computed over canonical encodings. Two
// schemes share one interface: Ed25519 for real deployments, and a keyed-hash
// mock that is fast and deterministic but forgeable by anyone holding the
// public key. Never use the mock outside tests and simulations.
enum class KeyScheme : std::uint8_t {
    Ed25519 = 1,
    MockHmac = 2,
};

std::string_view to_string(KeyScheme scheme);

struct PublicKey {
    KeyScheme scheme = KeyScheme::Ed25519;
    Bytes bytes;

    bool well_formed() const;
    void encode(Encoder& enc) const;
    static PublicKey decode(Decoder& dec);

    bool operator==(const PublicKey&) const = default;
};

using Signature = Bytes;

class KeyPair {
public:
    /// Deterministic key from an arbitrary seed string (sha256 of the seed is
    /// the secret). Used by the simulator and tests so runs are reproducible.
    static KeyPair from_seed(KeyScheme scheme, std::string_view seed);
    static KeyPair from_secret(KeyScheme scheme, ByteView secret32);

    const PublicKey& public_key() const { return public_; }
    KeyScheme scheme() const { return public_.scheme; }
    Signature sign(ByteView message) const;

private:
    KeyPair() = default;

    Bytes secret_;
    PublicKey public_;
};

bool verify_signature(const PublicKey& key, ByteView message, ByteView signature);

}  // namespace fiatchain
