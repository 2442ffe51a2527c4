#include "fiatchain/crypto.hpp"

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace fiatchain {

namespace {

using PkeyPtr = std::unique_ptr<EVP_PKEY, decltype(&EVP_PKEY_free)>;
using MdCtxPtr = std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)>;

constexpr std::string_view kMockDomain = "fiatchain/mock-key";

Bytes hmac_sha256(ByteView key, ByteView message) {
    Bytes out(32);
    std::size_t len = 0;
    if (!EVP_Q_mac(nullptr, "HMAC", nullptr, "SHA256", nullptr, key.data(), key.size(), message.data(),
                   message.size(), out.data(), out.size(), &len) ||
        len != 32)
        throw std::runtime_error("HMAC-SHA256 failed");
    return out;
}

PkeyPtr ed25519_private(ByteView secret) {
    return {EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, secret.data(), secret.size()), &EVP_PKEY_free};
}

}  // namespace

std::string_view to_string(KeyScheme scheme) {
    switch (scheme) {
        case KeyScheme::Ed25519: return "ed25519";
        case KeyScheme::MockHmac: return "mock";
    }
    return "unknown";
}

bool PublicKey::well_formed() const {
    switch (scheme) {
        case KeyScheme::Ed25519:
        case KeyScheme::MockHmac: return bytes.size() == 32;
    }
    return false;
}

void PublicKey::encode(Encoder& enc) const {
    enc.u8(static_cast<std::uint8_t>(scheme));
    enc.bytes(bytes);
}

PublicKey PublicKey::decode(Decoder& dec) {
    PublicKey key;
    key.scheme = static_cast<KeyScheme>(dec.u8());
    key.bytes = dec.bytes();
    return key;
}

KeyPair KeyPair::from_seed(KeyScheme scheme, std::string_view seed) {
    auto secret = sha256(as_bytes(seed));
    return from_secret(scheme, secret.bytes);
}

KeyPair KeyPair::from_secret(KeyScheme scheme, ByteView secret32) {
    if (secret32.size() != 32) throw std::invalid_argument("secret must be 32 bytes");
    KeyPair kp;
    kp.secret_.assign(secret32.begin(), secret32.end());
    kp.public_.scheme = scheme;
    if (scheme == KeyScheme::Ed25519) {
        auto pkey = ed25519_private(kp.secret_);
        if (!pkey) throw std::runtime_error("Ed25519 key construction failed");
        std::size_t len = 32;
        kp.public_.bytes.resize(32);
        if (EVP_PKEY_get_raw_public_key(pkey.get(), kp.public_.bytes.data(), &len) != 1 || len != 32)
            throw std::runtime_error("Ed25519 public key extraction failed");
    } else {
        Bytes material(kMockDomain.begin(), kMockDomain.end());
        material.insert(material.end(), kp.secret_.begin(), kp.secret_.end());
        auto digest = sha256(material);
        kp.public_.bytes.assign(digest.bytes.begin(), digest.bytes.end());
    }
    return kp;
}

Signature KeyPair::sign(ByteView message) const {
    if (public_.scheme == KeyScheme::MockHmac) return hmac_sha256(public_.bytes, message);

    auto pkey = ed25519_private(secret_);
    MdCtxPtr ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!pkey || !ctx || EVP_DigestSignInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1)
        throw std::runtime_error("Ed25519 sign init failed");
    Signature sig(64);
    std::size_t len = sig.size();
    if (EVP_DigestSign(ctx.get(), sig.data(), &len, message.data(), message.size()) != 1 || len != 64)
        throw std::runtime_error("Ed25519 sign failed");
    return sig;
}

bool verify_signature(const PublicKey& key, ByteView message, ByteView signature) {
    if (!key.well_formed()) return false;
    if (key.scheme == KeyScheme::MockHmac) {
        if (signature.size() != 32) return false;
        auto expected = hmac_sha256(key.bytes, message);
        return CRYPTO_memcmp(expected.data(), signature.data(), 32) == 0;
    }
    if (signature.size() != 64) return false;
    PkeyPtr pkey(EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, key.bytes.data(), key.bytes.size()),
                 &EVP_PKEY_free);
    MdCtxPtr ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!pkey || !ctx || EVP_DigestVerifyInit(ctx.get(), nullptr, nullptr, nullptr, pkey.get()) != 1) return false;
    return EVP_DigestVerify(ctx.get(), signature.data(), signature.size(), message.data(), message.size()) == 1;
}

}  // namespace fiatchain
