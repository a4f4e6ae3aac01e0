#!/usr/bin/env python3
# Copyright 2026 The dynenclave Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference values frozen into tests/test_attestation.cpp and
tests/test_channel.cpp.

Uses hashlib and the `cryptography` package only; shares no code with the
C++ implementation.
"""
import hashlib
import struct

from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey, X25519PublicKey
from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305
from cryptography.hazmat.primitives import serialization

RAW = serialization.Encoding.Raw


def measurement(image_id: bytes, capacity: int) -> bytes:
    return hashlib.sha256(struct.pack(">I", len(image_id)) + image_id + b"\x01" +
                          struct.pack(">Q", capacity)).digest()


def kdf(secret: bytes, label: bytes, client_pub: bytes, enclave_pub: bytes) -> bytes:
    return hashlib.blake2b(label + client_pub + enclave_pub, key=secret, digest_size=32).digest()


def frame(msg_type: int, seq: int, payload: bytes) -> bytes:
    return b"DSGX" + bytes([1, msg_type]) + struct.pack(">QI", seq, len(payload)) + payload


def sealed(key: bytes, label: bytes, msg_type: int, seq: int, pt: bytes) -> bytes:
    header = frame(msg_type, seq, b"\0" * (len(pt) + 16))[:18]
    nonce = label + b"\0" + struct.pack(">Q", seq)
    return header + ChaCha20Poly1305(key).encrypt(nonce, pt, header)


def main():
    print("measurement default", measurement(b"dynenclave-core-v1", 128 << 20).hex())
    print("measurement 4KiB", measurement(b"dynenclave-core-v1", 4096).hex())

    secret = bytes(range(1, 33))
    cpub = bytes(range(0x40, 0x60))
    epub = bytes(range(0x80, 0xA0))
    print("kdf c2s", kdf(secret, b"dynenclave c2s v1", cpub, epub).hex())
    print("kdf s2c", kdf(secret, b"dynenclave s2c v1", cpub, epub).hex())

    a = bytes.fromhex("77076d0a7318a57d3c16c17251b26645df4c2f87ebc0992ab177fba51db92c2a")
    b_pub = bytes.fromhex("de9edb7d7b7dc1b4d35b61c2ece435373f8343c85b78674dadfc7e146f882b4f")
    shared = X25519PrivateKey.from_private_bytes(a).exchange(X25519PublicKey.from_public_bytes(b_pub))
    print("x25519 shared", shared.hex())

    seed = bytes(range(0xA0, 0xC0))
    sk = Ed25519PrivateKey.from_private_bytes(seed)
    pk = sk.public_key().public_bytes(RAW, serialization.PublicFormat.Raw)
    print("ed25519 secret", (seed + pk).hex())
    print("ed25519 public", pk.hex())
    print("ed25519 sig(abc)", sk.sign(b"abc").hex())

    key = bytes(range(0x10, 0x30))
    print("sealed c2s LOAD_FN seq1 'hello'", sealed(key, b"C2S", 0x11, 1, b"hello").hex())
    print("sealed s2c EXEC_RESULT seq7 ''", sealed(key, b"S2C", 0x14, 7, b"").hex())


if __name__ == "__main__":
    main()
