#pragma once

#include <cstdint>

#include "fiatchain/payload.hpp"

namespace fiatchain {

struct Transaction {
    AccountId sender;
    std::uint64_t nonce = 0;
    Payload payload = Transfer{};
    Signature signature;

    /// Canonical encoding of (sender, nonce, payload): what gets signed.
    Bytes signing_bytes() const;
    /// signing_bytes followed by the length-prefixed signature.
    Bytes encode() const;
    void encode(Encoder& enc) const;
    static Transaction decode(Decoder& dec);
    /// Parses a whole buffer; throws DecodeError on trailing bytes.
    static Transaction decode(ByteView raw);

    TxId id() const;

    bool operator==(const Transaction&) const = default;
};

Transaction make_transaction(const AccountId& sender, std::uint64_t nonce, Payload payload, const KeyPair& key);

}  // namespace fiatchain
