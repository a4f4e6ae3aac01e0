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

#include "dynenclave/attestation.hpp"

#include <sodium.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dynenclave {

namespace {

constexpr std::string_view kLabelClientToServer = "dynenclave c2s v1";
constexpr std::string_view kLabelServerToClient = "dynenclave s2c v1";

SessionKey kdf(const SharedSecret& secret, std::string_view label,
               const KxPublicKey& client_pub, const KxPublicKey& enclave_pub) {
  crypto_generichash_state st;
  crypto_generichash_init(&st, secret.data(), secret.size(), kSessionKeySize);
  crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(label.data()),
                            label.size());
  crypto_generichash_update(&st, client_pub.data(), client_pub.size());
  crypto_generichash_update(&st, enclave_pub.data(), enclave_pub.size());
  SessionKey out{};
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view hex, const char* what) {
  Bytes b;
  try {
    b = from_hex(hex);
  } catch (const Error&) {
    fail(ErrorCode::kUsage, std::string("invalid hex for ") + what);
  }
  if (b.size() != N)
    fail(ErrorCode::kUsage, std::string(what) + " must be " + std::to_string(N) + " bytes");
  std::array<std::uint8_t, N> out{};
  std::copy(b.begin(), b.end(), out.begin());
  return out;
}

template <std::size_t N>
void copy_field(ByteReader& r, std::array<std::uint8_t, N>& out) {
  ByteView f = r.field();
  if (f.size() != N) fail(ErrorCode::kMalformedFrame, "report field has wrong length");
  std::copy(f.begin(), f.end(), out.begin());
}

}  // namespace

void crypto_init() {
  if (sodium_init() < 0) fail(ErrorCode::kPlatformUnsupported, "libsodium initialisation failed");
}

Measurement compute_measurement(const EnclaveConfig& config) {
  crypto_init();
  Bytes input = ByteWriter()
                    .field(config.core_image_id)
                    .u8(kProtocolVersion)
                    .u64(config.arena_capacity)
                    .take();
  Measurement m{};
  crypto_hash_sha256(m.data(), input.data(), input.size());
  return m;
}

SigningKey SigningKey::generate() {
  crypto_init();
  SigningKey k;
  crypto_sign_keypair(k.verify_key_.data(), k.secret_.data());
  return k;
}

SigningKey SigningKey::from_hex(std::string_view hex) {
  crypto_init();
  SigningKey k;
  k.secret_ = fixed_from_hex<64>(hex, "signing key");
  crypto_sign_ed25519_sk_to_pk(k.verify_key_.data(), k.secret_.data());
  return k;
}

SigningKey SigningKey::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot read signing key " + path);
  std::string hex;
  in >> hex;
  return from_hex(hex);
}

void SigningKey::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot write signing key " + path);
  out << to_hex() << "\n";
}

std::string SigningKey::to_hex() const { return dynenclave::to_hex(secret_); }

Signature SigningKey::sign(ByteView message) const {
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_.data());
  return sig;
}

VerifyKey verify_key_from_hex(std::string_view hex) {
  return fixed_from_hex<kVerifyKeySize>(hex, "verification key");
}

Measurement measurement_from_hex(std::string_view hex) {
  return fixed_from_hex<32>(hex, "measurement");
}

KxKeyPair KxKeyPair::generate() {
  crypto_init();
  KxKeyPair kp;
  randombytes_buf(kp.secret_key.data(), kp.secret_key.size());
  crypto_scalarmult_base(kp.public_key.data(), kp.secret_key.data());
  return kp;
}

Bytes AttestationReport::signed_message() const {
  return ByteWriter().raw(measurement).raw(enclave_kx_public).raw(client_nonce).take();
}

Bytes AttestationReport::encode() const {
  return ByteWriter()
      .field(measurement)
      .field(enclave_kx_public)
      .field(client_nonce)
      .field(signature)
      .take();
}

AttestationReport AttestationReport::decode(ByteView bytes) {
  ByteReader r(bytes, ErrorCode::kMalformedFrame);
  AttestationReport rep;
  copy_field(r, rep.measurement);
  copy_field(r, rep.enclave_kx_public);
  copy_field(r, rep.client_nonce);
  copy_field(r, rep.signature);
  r.expect_done();
  return rep;
}

SessionKeys derive_session_keys(const SharedSecret& shared_secret,
                                const KxPublicKey& client_kx_public,
                                const KxPublicKey& enclave_kx_public, Role role) {
  crypto_init();
  if (sodium_is_zero(shared_secret.data(), shared_secret.size()))
    fail(ErrorCode::kDegenerateSecret, "key agreement produced an all-zero secret");
  SessionKey c2s = kdf(shared_secret, kLabelClientToServer, client_kx_public, enclave_kx_public);
  SessionKey s2c = kdf(shared_secret, kLabelServerToClient, client_kx_public, enclave_kx_public);
  if (role == Role::kClient) return {c2s, s2c};
  return {s2c, c2s};
}

SharedSecret key_agreement(const KxSecretKey& own_secret, const KxPublicKey& peer_public) {
  crypto_init();
  SharedSecret out{};
  if (crypto_scalarmult(out.data(), own_secret.data(), peer_public.data()) != 0)
    fail(ErrorCode::kInvalidPublicKey, "peer public key is a low-order point");
  return out;
}

RaInitResult enclave_ra_init(const Enclave& enclave, const SigningKey& signing_key,
                             ByteView client_nonce, ByteView client_kx_public) {
  if (client_nonce.size() != kNonceSize)
    fail(ErrorCode::kInvalidPublicKey, "client nonce must be 16 bytes");
  if (client_kx_public.size() != kKxKeySize)
    fail(ErrorCode::kInvalidPublicKey, "client public key must be 32 bytes");

  KxPublicKey client_pub{};
  std::copy(client_kx_public.begin(), client_kx_public.end(), client_pub.begin());

  KxKeyPair eph = KxKeyPair::generate();
  SharedSecret secret = key_agreement(eph.secret_key, client_pub);

  RaInitResult out;
  out.report.measurement = enclave.measurement();
  out.report.enclave_kx_public = eph.public_key;
  std::copy(client_nonce.begin(), client_nonce.end(), out.report.client_nonce.begin());
  out.report.signature = signing_key.sign(out.report.signed_message());
  out.server_keys = derive_session_keys(secret, client_pub, eph.public_key, Role::kServer);
  sodium_memzero(eph.secret_key.data(), eph.secret_key.size());
  sodium_memzero(secret.data(), secret.size());
  return out;
}

void client_verify_report(const AttestationReport& report, const VerifyKey& pinned_verify_key,
                          const Measurement& expected_measurement, const Nonce& sent_nonce) {
  crypto_init();
  Bytes msg = report.signed_message();
  if (crypto_sign_verify_detached(report.signature.data(), msg.data(), msg.size(),
                                  pinned_verify_key.data()) != 0)
    fail(ErrorCode::kBadSignature, "report signature does not verify under the pinned key");
  if (report.client_nonce != sent_nonce)
    fail(ErrorCode::kNonceMismatch, "report echoes a different nonce (replay?)");
  if (report.measurement != expected_measurement)
    fail(ErrorCode::kMeasurementMismatch,
         "enclave measurement " + to_hex(report.measurement) + " differs from expected " +
             to_hex(expected_measurement));
}

Nonce random_nonce() {
  crypto_init();
  Nonce n{};
  randombytes_buf(n.data(), n.size());
  return n;
}

}  // namespace dynenclave
