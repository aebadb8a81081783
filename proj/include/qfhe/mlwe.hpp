#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qfhe/ring.hpp"
#include "qfhe/rng.hpp"

namespace qfhe::mlwe {

/// Secret key: rank-k vector of ternary ring elements at one chain level.
struct SecretKey {
  uint64_t key_id = 0;
  std::string preset_name;
  int modulus_index = 0;
  std::vector<RingElement> s;  // length k, coefficients in {-1, 0, 1} mod q

  uint32_t rank() const { return static_cast<uint32_t>(s.size()); }
};

/// Public key: seed-expanded k x k matrix A plus b = A s + e.
/// A is never stored; it is re-expanded from the 32-byte seed on demand.
struct PublicKey {
  uint64_t key_id = 0;
  std::string preset_name;
  int modulus_index = 0;
  std::array<uint8_t, 32> seed{};
  std::vector<RingElement> b;  // length k

  uint32_t rank() const { return static_cast<uint32_t>(b.size()); }
};

/// Expand the pk seed into the k x k matrix A (row-major). Deterministic.
std::vector<RingElement> expand_a(const PublicKey& pk);

/// Regev-form scalar ciphertext: (a, c) with c = <a, s> + e + Delta * m.
/// The plaintext is a signed fixed-point scalar in the constant coefficient;
/// scale_log2 is the current fixed-point exponent (it grows as dyadic gate
/// numerators are multiplied in); noise_bound is the analytic eta_inf ledger.
struct Ciphertext {
  std::vector<RingElement> a;  // length k
  RingElement c;
  int32_t scale_log2 = 0;
  uint64_t noise_bound = 0;
  int modulus_index = 0;
  uint64_t key_id = 0;

  uint32_t rank() const { return static_cast<uint32_t>(a.size()); }
};

/// GSW-form encryption of a small integer (normally a bit). Rows are
/// Regev-form encryptions of m * B^j at each module position, so external
/// products with Regev ciphertexts are one gadget decomposition away.
struct GswCiphertext {
  // rows[r] = one Regev row: k "a" elements followed by the "c" element.
  std::vector<std::vector<RingElement>> rows;
  uint32_t gadget_base_log2 = 0;
  uint32_t levels = 0;  // ell_g
  uint64_t noise_bound = 0;
  int modulus_index = 0;
  uint64_t key_id = 0;
};

/// Gadget-decomposed encryptions of a source key under a target key.
struct KeySwitchHint {
  uint64_t from_key_id = 0;
  uint64_t to_key_id = 0;
  int modulus_index = 0;  // level of the target key
  uint32_t gadget_base_log2 = 0;
  uint32_t levels = 0;
  // hint[i][j] = Regev row encrypting B^j * s_from[i] under sk_to.
  std::vector<std::vector<std::vector<RingElement>>> hint;
};

/// Client-side key material for a whole modulus chain: one key pair per
/// level plus the switch hints used by refresh (level i at modulus i+1 to
/// the fresh level i+1 key).
struct KeyChain {
  std::string preset_name;
  std::vector<SecretKey> sks;
  std::vector<PublicKey> pks;
  std::vector<KeySwitchHint> refresh_hints;
};

struct KeygenOptions {
  bool force_zero_error = false;  // test hook: b = A s exactly
};

std::pair<SecretKey, PublicKey> keygen(const Preset& pre, SeededGenerator& rng,
                                       const KeygenOptions& opts = {});
KeyChain keygen_chain(const Preset& pre, SeededGenerator& rng);

/// Fixed-point encode/decode helpers.
int64_t encode_fixed(double value, int32_t scale_log2);
double decode_fixed(int64_t units, int32_t scale_log2);

/// Fresh-encryption analytic noise bound: 6 sigma (tail cut).
uint64_t fresh_noise_bound(const Preset& pre);

/// Public-key encryption: a signed-monomial rotation of the (A, b) rows --
/// a combination of encryptions of zero -- plus the message encoding.
/// Rotations preserve the error's infinity norm, so the fresh bound is
/// exactly 6 sigma.
Ciphertext encrypt(const PublicKey& pk, double value, SeededGenerator& rng,
                   std::optional<int32_t> scale_log2 = std::nullopt);

/// Secret-key encryption: uniform mask, fresh Gaussian error.
Ciphertext encrypt_sk(const SecretKey& sk, double value, SeededGenerator& rng,
                      std::optional<int32_t> scale_log2 = std::nullopt);

/// Raw phase c - <a, s> centered; coefficient 0 carries the message.
int64_t decrypt_phase(const SecretKey& sk, const Ciphertext& ct);

/// round(phase / effective scale). Past a modulus switch the effective scale
/// carries the exact chain ratio q_idx / q_0 alongside 2^scale_log2.
double decrypt(const SecretKey& sk, const Ciphertext& ct);

/// Effective scale of a ciphertext in double precision.
double effective_scale(const Ciphertext& ct);

Ciphertext he_add(const Ciphertext& a, const Ciphertext& b);
Ciphertext he_sub(const Ciphertext& a, const Ciphertext& b);
Ciphertext he_neg(const Ciphertext& a);

/// Plaintext-constant multiply by an integer alpha, |alpha| <= kConstMulCap.
inline constexpr int64_t kConstMulCap = int64_t{1} << 26;
Ciphertext he_const_mul(const Ciphertext& ct, int64_t alpha);

/// (re, im) ciphertext pair times a Gaussian-integer constant a + bi via the
/// 2x2 rotation rule. noise_bound scales by max(|a|, |b|).
std::pair<Ciphertext, Ciphertext> he_const_mul_complex(const Ciphertext& re, const Ciphertext& im,
                                                       int64_t alpha_re, int64_t alpha_im);

/// Plaintext add: ct + Delta * value, no noise added.
Ciphertext he_plain_add(const Ciphertext& ct, double value);

GswCiphertext gsw_encrypt(const SecretKey& sk, int bit, SeededGenerator& rng);
/// Noiseless gadget encoding of a known small constant (used for bit
/// complements: gsw_not(g) = gsw_trivial(1) - g).
GswCiphertext gsw_trivial(const Preset& pre, int modulus_index, uint64_t key_id, int64_t value);
GswCiphertext gsw_add(const GswCiphertext& a, const GswCiphertext& b);
GswCiphertext gsw_sub(const GswCiphertext& a, const GswCiphertext& b);
GswCiphertext gsw_not(const GswCiphertext& a);
/// Recover the plaintext bit (test/owner path; needs sk).
int gsw_decrypt_bit(const SecretKey& sk, const GswCiphertext& g);

/// External product: Regev ciphertext times GSW bit. Plaintext b * m;
/// noise_bound += ell_g * B_g * k * d * sigma (plus the GSW row ledger).
Ciphertext external_product(const Ciphertext& ct, const GswCiphertext& bit_ct);

/// GSW x GSW product (bit AND), realized row-wise by external products.
GswCiphertext gsw_mul(const GswCiphertext& a, const GswCiphertext& b);

KeySwitchHint gen_keyswitch_hint(const SecretKey& sk_from, const SecretKey& sk_to,
                                 SeededGenerator& rng);
/// Dec(sk_to, switched) = Dec(sk_from, ct); noise_bound += ell_g * B_g * k * sigma.
Ciphertext key_switch(const Ciphertext& ct, const KeySwitchHint& hint);

/// Rescale to a smaller chain modulus. Plaintext preserved (the effective
/// scale absorbs the exact ratio); noise_bound <- ceil(bound * q'/q) + k*d/2.
Ciphertext mod_switch(const Ciphertext& ct, int target_index, const Preset& pre);

/// Test oracle: eta_inf of (c - <a,s> - encode(reference)). Requires sk.
uint64_t noise_actual(const SecretKey& sk, const Ciphertext& ct, double reference_plaintext);

// ---------------------------------------------------------------------------
// Analytic noise ledger over abstract operation traces (rules (i)-(iv)).
// ---------------------------------------------------------------------------

struct TraceOp {
  enum class Kind { Gate, Add, ConstMul, ModSwitch, KeySwitch, WeakStep, CapsuleMul, ControlledGate };
  Kind kind = Kind::Gate;
  std::string label;
  uint64_t tau_max = 1;    // Gate: ||tau||_max
  uint64_t alpha = 1;      // ConstMul: |alpha|
  double ratio = 1.0;      // ModSwitch: q'/q
  double theta = 0.0;      // WeakStep strength
  uint32_t kraus_count = 2;  // CapsuleMul

  static TraceOp gate(std::string label, uint64_t tau);
  static TraceOp add();
  static TraceOp const_mul(uint64_t alpha);
  static TraceOp mod_switch(double ratio);
  static TraceOp key_switch();
  static TraceOp weak_step(double theta);
  static TraceOp capsule_mul(uint32_t kraus_count);
  static TraceOp controlled_gate(std::string label);
};

/// The teleport trace as budgeted in the noise table: BellPrep, H, CNOT,
/// Measurement CP, conditioned X/Z with tau_max 1,1,2,1,1.
std::vector<TraceOp> teleport_trace();

struct NoiseLedger {
  struct Row {
    std::string label;
    uint64_t increment;  // added eta_inf for additive rows
    uint64_t running;    // fresh bound + cumulative increments
  };
  std::vector<Row> rows;
  uint64_t fresh_bound = 0;      // 6 sigma
  uint64_t trace_total = 0;      // sum of additive increments alone
  uint64_t final_running = 0;    // fresh bound carried through every rule
};

/// Worst-case eta_inf ledger for an abstract op trace per the four rules:
/// (i) linear maps scale by ||tau||_max (tracked additively per the gate
/// table as tau * sigma increments), (ii) addition doubles, (iii) constant
/// products scale by |alpha|, (iv) modulus switch scales by q'/q plus the
/// k*d/2 rounding term.
NoiseLedger noise_bound_of(std::span<const TraceOp> trace, const Preset& pre);

// ---------------------------------------------------------------------------
// Serialization (key files, ciphertext files). Little-endian throughout.
// ---------------------------------------------------------------------------

std::vector<uint8_t> serialize_public_key(const PublicKey& pk, const Preset& pre);
PublicKey deserialize_public_key(std::span<const uint8_t> bytes, const Preset& pre);
std::vector<uint8_t> serialize_secret_key(const SecretKey& sk, const Preset& pre);
SecretKey deserialize_secret_key(std::span<const uint8_t> bytes, const Preset& pre);
std::vector<uint8_t> serialize_ciphertext(const Ciphertext& ct, const Preset& pre);
Ciphertext deserialize_ciphertext(std::span<const uint8_t> bytes, const Preset& pre);

/// ell_g for a given modulus at base 2^base_log2.
uint32_t gadget_levels(uint64_t q, uint32_t base_log2);

}  // namespace qfhe::mlwe
