#include "fiatchain/transaction.hpp"

namespace fiatchain {

Bytes Transaction::signing_bytes() const {
    Encoder enc;
    sender.encode(enc);
    enc.u64(nonce);
    payload.encode(enc);
    return enc.take();
}

void Transaction::encode(Encoder& enc) const {
    sender.encode(enc);
    enc.u64(nonce);
    payload.encode(enc);
    enc.bytes(signature);
}

Bytes Transaction::encode() const {
    Encoder enc;
    encode(enc);
    return enc.take();
}

Transaction Transaction::decode(Decoder& dec) {
    Transaction tx;
    tx.sender = AccountId::decode(dec);
    tx.nonce = dec.u64();
    tx.payload = Payload::decode(dec);
    tx.signature = dec.bytes();
    return tx;
}

Transaction Transaction::decode(ByteView raw) {
    Decoder dec(raw);
    auto tx = decode(dec);
    dec.expect_end();
    return tx;
}

TxId Transaction::id() const { return TxId{sha256(encode())}; }

Transaction make_transaction(const AccountId& sender, std::uint64_t nonce, Payload payload, const KeyPair& key) {
    Transaction tx;
    tx.sender = sender;
    tx.nonce = nonce;
    tx.payload = std::move(payload);
    tx.signature = key.sign(tx.signing_bytes());
    return tx;
}

}  // namespace fiatchain
