"""Independent reference for the frozen vectors in tests/test_vectors.cpp.

Re-implements the canonical encoding with hashlib/hmac and the
`cryptography` package; shares no code with the C++ library.
"""
import hashlib
import hmac

from cryptography.hazmat.primitives import serialization
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey

ED25519, MOCK = 1, 2


def u64(v):
    return v.to_bytes(8, "big")


def blob(b):
    return len(b).to_bytes(4, "big") + b


def sha(b):
    return hashlib.sha256(b).digest()


def keypair(scheme, seed):
    secret = sha(seed.encode())
    if scheme == ED25519:
        sk = Ed25519PrivateKey.from_private_bytes(secret)
        pk = sk.public_key().public_bytes(serialization.Encoding.Raw, serialization.PublicFormat.Raw)
        return pk, lambda m: sk.sign(m)
    pk = sha(b"fiatchain/mock-key" + secret)
    return pk, lambda m: hmac.new(pk, m, hashlib.sha256).digest()


def key_enc(scheme, pk):
    return bytes([scheme]) + blob(pk)


def account_id(scheme, pk):
    return sha(key_enc(scheme, pk))


def transfer_tx(scheme, sender_seed, to_seed, amount, nonce):
    spk, sign = keypair(scheme, sender_seed)
    tpk, _ = keypair(scheme, to_seed)
    sender = account_id(scheme, spk)
    to = account_id(scheme, tpk)
    payload = bytes([0]) + blob(to) + u64(amount)
    signing = blob(sender) + u64(nonce) + payload
    sig = sign(signing)
    full = signing + blob(sig)
    return full, sha(full)


def main():
    rfc_secret = bytes.fromhex("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60")
    sk = Ed25519PrivateKey.from_private_bytes(rfc_secret)
    print("rfc8032_pk", sk.public_key().public_bytes(serialization.Encoding.Raw,
                                                     serialization.PublicFormat.Raw).hex())
    print("rfc8032_sig", sk.sign(b"").hex())
    for scheme, name in ((ED25519, "ed25519"), (MOCK, "mock")):
        pk, _ = keypair(scheme, "actor:alice")
        print(f"{name}_alice_pk", pk.hex())
        print(f"{name}_alice_id", account_id(scheme, pk).hex())
        full, txid = transfer_tx(scheme, "actor:alice", "actor:bob", 100, 0)
        print(f"{name}_transfer_tx", full.hex())
        print(f"{name}_transfer_id", txid.hex())
    print("accrual_max_3_7", (2**64 - 1) * 3 // 7)
    print("accrual_1000_5_100", 1000 * 5 // 100)
    print("accrual_999_1_1000", 999 * 1 // 1000)


if __name__ == "__main__":
    main()
