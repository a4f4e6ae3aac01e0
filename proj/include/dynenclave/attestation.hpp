// Copyright 2026 The dynenclave Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DYNENCLAVE_ATTESTATION_HPP_
#define DYNENCLAVE_ATTESTATION_HPP_

// Simulated remote attestation. A pinned Ed25519 key signs the enclave
// measurement together with a per-session X25519 public key and the
// client's nonce; both sides then derive directional session keys from the
// X25519 shared secret with keyed BLAKE2b.

#include <array>
#include <cstdint>
#include <string>

#include "dynenclave/bytes.hpp"
#include "dynenclave/enclave.hpp"

namespace dynenclave {

inline constexpr std::uint8_t kProtocolVersion = 0x01;
inline constexpr std::size_t kNonceSize = 16;
inline constexpr std::size_t kKxKeySize = 32;
inline constexpr std::size_t kSignatureSize = 64;
inline constexpr std::size_t kVerifyKeySize = 32;
inline constexpr std::size_t kSessionKeySize = 32;

using Nonce = std::array<std::uint8_t, kNonceSize>;
using KxPublicKey = std::array<std::uint8_t, kKxKeySize>;
using KxSecretKey = std::array<std::uint8_t, kKxKeySize>;
using SharedSecret = std::array<std::uint8_t, kKxKeySize>;
using VerifyKey = std::array<std::uint8_t, kVerifyKeySize>;
using Signature = std::array<std::uint8_t, kSignatureSize>;
using SessionKey = std::array<std::uint8_t, kSessionKeySize>;

// Throws if libsodium cannot initialise. Safe to call repeatedly.
void crypto_init();

// SHA-256( u32be(len(core_image_id)) || core_image_id || version || u64be(arena_capacity) ).
Measurement compute_measurement(const EnclaveConfig& config);

// Long-term report signing key (Ed25519), distributed out of band as the
// pinned verification key.
class SigningKey {
 public:
  static SigningKey generate();
  // 64-byte libsodium secret key, hex encoded.
  static SigningKey from_hex(std::string_view hex);
  static SigningKey load(const std::string& path);
  void save(const std::string& path) const;

  std::string to_hex() const;
  const VerifyKey& verify_key() const { return verify_key_; }
  Signature sign(ByteView message) const;

 private:
  std::array<std::uint8_t, 64> secret_{};
  VerifyKey verify_key_{};
};

VerifyKey verify_key_from_hex(std::string_view hex);
Measurement measurement_from_hex(std::string_view hex);

struct KxKeyPair {
  KxPublicKey public_key{};
  KxSecretKey secret_key{};

  static KxKeyPair generate();
};

struct AttestationReport {
  Measurement measurement{};
  KxPublicKey enclave_kx_public{};
  Nonce client_nonce{};
  Signature signature{};

  // Bytes covered by the signature.
  Bytes signed_message() const;

  // Length-prefixed fields in declaration order.
  Bytes encode() const;
  // Throws MalformedFrame.
  static AttestationReport decode(ByteView bytes);

  friend bool operator==(const AttestationReport&, const AttestationReport&) = default;
};

struct SessionKeys {
  SessionKey send_key{};
  SessionKey recv_key{};
};

enum class Role { kClient, kServer };

// Keyed BLAKE2b-256 over direction label || client public || enclave public,
// keyed with the shared secret. Throws DegenerateSecret for an all-zero
// secret.
SessionKeys derive_session_keys(const SharedSecret& shared_secret,
                                const KxPublicKey& client_kx_public,
                                const KxPublicKey& enclave_kx_public, Role role);

// X25519. Throws InvalidPublicKey when the peer key yields a low-order
// (all-zero) result.
SharedSecret key_agreement(const KxSecretKey& own_secret, const KxPublicKey& peer_public);

struct RaInitResult {
  AttestationReport report;
  SessionKeys server_keys;
};

// Enclave side of attestation: fresh ephemeral key pair per call. Throws
// InvalidPublicKey for a wrong-sized nonce or key, or a low-order key.
RaInitResult enclave_ra_init(const Enclave& enclave, const SigningKey& signing_key,
                             ByteView client_nonce, ByteView client_kx_public);

// Checks signature, then nonce, then measurement. Throws BadSignature,
// NonceMismatch or MeasurementMismatch.
void client_verify_report(const AttestationReport& report, const VerifyKey& pinned_verify_key,
                          const Measurement& expected_measurement, const Nonce& sent_nonce);

Nonce random_nonce();

}  // namespace dynenclave

#endif  // DYNENCLAVE_ATTESTATION_HPP_
