#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qfhe/rng.hpp"

namespace qfhe {

/// Parameters of one ring R_q = Z_q[x]/(x^d + 1).
///
/// d is a power of two in {64, 128, 256, 512}; q is an odd prime with
/// q = 1 (mod 2d) so the negacyclic NTT exists; psi is a fixed primitive
/// 2d-th root of unity mod q; sigma is the integer Gaussian width of the
/// error distribution.
struct RingParams {
  uint32_t d = 0;
  uint64_t q = 0;
  uint64_t psi = 0;
  uint32_t sigma = 3;
  std::string preset_name;

  bool operator==(const RingParams& o) const { return d == o.d && q == o.q; }
};

/// One modulus of a preset chain.
struct ChainModulus {
  uint64_t q;
  uint64_t psi;
};

/// A named parameter preset: the ring degree, the modulus chain (largest
/// first, geometric decrease), the module rank, gadget base and the base
/// fixed-point precision used by the HE layer.
struct Preset {
  std::string name;
  uint32_t d;
  uint32_t rank;           // module rank k
  uint32_t sigma;
  uint32_t gadget_base_log2;
  int32_t scale_bits;      // base fractional precision F
  std::vector<ChainModulus> chain;

  RingParams params_at(int modulus_index) const;
  RingParams params() const { return params_at(0); }
};

/// Frozen presets: "toy" (d=64), "teleport" (d=256), "wide" (d=512) and the
/// test-only "tiny" (d=64, small chain so refresh logic is exercised).
const Preset& preset(const std::string& name);
std::vector<std::string> preset_names();

/// Polynomial in R_q, coefficient (power-of-x) order, residues in [0, q).
struct RingElement {
  std::vector<uint64_t> coeffs;

  bool operator==(const RingElement& o) const { return coeffs == o.coeffs; }
};

RingElement ring_zero(const RingParams& p);
RingElement ring_constant(uint64_t value_mod_q, const RingParams& p);

uint64_t mod_add(uint64_t a, uint64_t b, uint64_t q);
uint64_t mod_sub(uint64_t a, uint64_t b, uint64_t q);
uint64_t mod_mul(uint64_t a, uint64_t b, uint64_t q);
uint64_t mod_pow(uint64_t a, uint64_t e, uint64_t q);

/// Centered representative in (-q/2, q/2].
int64_t centered(uint64_t c, uint64_t q);
uint64_t from_centered(int64_t v, uint64_t q);

RingElement poly_add(const RingElement& a, const RingElement& b, const RingParams& p);
RingElement poly_sub(const RingElement& a, const RingElement& b, const RingParams& p);
RingElement poly_neg(const RingElement& a, const RingParams& p);
RingElement poly_scalar_mul(const RingElement& a, uint64_t s, const RingParams& p);

/// Negacyclic product via forward NTT, pointwise multiply, inverse NTT.
RingElement poly_mul(const RingElement& a, const RingElement& b, const RingParams& p);

/// a * sign * x^power mod (x^d + 1). power in [0, 2d).
RingElement monomial_mul(const RingElement& a, uint32_t power, bool negate, const RingParams& p);

/// Schoolbook O(d^2) negacyclic product; the independent oracle for poly_mul.
RingElement poly_mul_schoolbook(const RingElement& a, const RingElement& b, const RingParams& p);

/// In-place negacyclic NTT (exposed for tests and benchmarks).
void ntt_forward(std::vector<uint64_t>& v, const RingParams& p);
void ntt_inverse(std::vector<uint64_t>& v, const RingParams& p);

/// Coefficients i.i.d. uniform over [0, q).
RingElement sample_uniform(const RingParams& p, SeededGenerator& rng);

/// Coefficients i.i.d. centered discrete Gaussian of width sigma, tail cut
/// at 6*sigma, stored mod q.
RingElement sample_gaussian(const RingParams& p, SeededGenerator& rng);
int64_t sample_gaussian_scalar(uint32_t sigma, SeededGenerator& rng);

/// Coefficients i.i.d. uniform over {-1, 0, 1}.
RingElement sample_ternary(const RingParams& p, SeededGenerator& rng);

/// max_i |centered(a_i)|.
uint64_t inf_norm(const RingElement& a, const RingParams& p);

/// 16-byte serialization header: magic "QFHE", version, d, then q.
struct FileHeader {
  static constexpr char kMagic[4] = {'Q', 'F', 'H', 'E'};
  uint16_t version = 1;
  uint16_t d = 0;
  uint64_t q = 0;
};

void write_header(std::vector<uint8_t>& out, const RingParams& p);
/// Returns bytes consumed; throws on bad magic/version.
size_t read_header(std::span<const uint8_t> in, FileHeader& h);

void write_u64(std::vector<uint8_t>& out, uint64_t v);
uint64_t read_u64(std::span<const uint8_t> in, size_t& off);

void write_element(std::vector<uint8_t>& out, const RingElement& e);
RingElement read_element(std::span<const uint8_t> in, size_t& off, const RingParams& p);

std::vector<uint8_t> serialize_element(const RingElement& e, const RingParams& p);
RingElement deserialize_element(std::span<const uint8_t> bytes, RingParams* params_out = nullptr);

}  // namespace qfhe
