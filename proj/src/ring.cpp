#include "qfhe/ring.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qfhe {

namespace {

bool is_pow2(uint32_t x) { return x && (x & (x - 1)) == 0; }

void check_params(const RingParams& p) {
  if (!is_pow2(p.d) || p.d < 8 || p.d > 512) {
    throw std::invalid_argument("RingParams: d must be a small power of two");
  }
  if (p.q % 2 == 0 || p.q % (2 * static_cast<uint64_t>(p.d)) != 1) {
    throw std::invalid_argument("RingParams: q must be odd with q = 1 (mod 2d)");
  }
}

void check_same(const RingElement& a, const RingParams& p) {
  if (a.coeffs.size() != p.d) {
    throw std::invalid_argument("ring element does not match params (degree mismatch)");
  }
}

}  // namespace

RingParams Preset::params_at(int modulus_index) const {
  if (modulus_index < 0 || modulus_index >= static_cast<int>(chain.size())) {
    throw std::invalid_argument("modulus index outside preset chain");
  }
  RingParams p;
  p.d = d;
  p.q = chain[modulus_index].q;
  p.psi = chain[modulus_index].psi;
  p.sigma = sigma;
  p.preset_name = name;
  return p;
}

const Preset& preset(const std::string& name) {
  // Chain moduli are the smallest primes above each target with q = 1 (mod 2d);
  // psi values are fixed primitive 2d-th roots of unity, verified in tests.
  static const std::map<std::string, Preset> kPresets = {
      {"toy",
       Preset{"toy", 64, 2, 3, 8, 24,
              {{1073741953ULL, 155881653ULL},
               {1049089ULL, 365501ULL},
               {1153ULL, 1096ULL}}}},
      {"teleport",
       Preset{"teleport", 256, 3, 3, 8, 24,
              {{1125899906844161ULL, 1115722689954469ULL},
               {1099511630849ULL, 92385197730ULL},
               {1073750017ULL, 387049130ULL}}}},
      {"wide",
       Preset{"wide", 512, 3, 3, 8, 20,
              {{1125899906856961ULL, 717568247957303ULL},
               {1099511630849ULL, 915831568638ULL},
               {1073750017ULL, 381780781ULL}}}},
      // Test preset: q small enough that teleport-sized circuits cross the
      // refresh threshold; gentler chain and gadget base so refreshed
      // ciphertexts stay decryptable at the lower moduli.
      {"tiny",
       Preset{"tiny", 64, 2, 3, 2, 8,
              {{131713ULL, 125973ULL},
               {20353ULL, 8975ULL},
               {2689ULL, 2327ULL}}}},
  };
  auto it = kPresets.find(name);
  if (it == kPresets.end()) {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return it->second;
}

std::vector<std::string> preset_names() { return {"toy", "teleport", "wide", "tiny"}; }

RingElement ring_zero(const RingParams& p) {
  RingElement e;
  e.coeffs.assign(p.d, 0);
  return e;
}

RingElement ring_constant(uint64_t value_mod_q, const RingParams& p) {
  RingElement e = ring_zero(p);
  e.coeffs[0] = value_mod_q % p.q;
  return e;
}

uint64_t mod_add(uint64_t a, uint64_t b, uint64_t q) {
  uint64_t s = a + b;
  if (s >= q || s < a) s -= q;
  return s;
}

uint64_t mod_sub(uint64_t a, uint64_t b, uint64_t q) { return a >= b ? a - b : a + q - b; }

uint64_t mod_mul(uint64_t a, uint64_t b, uint64_t q) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}

uint64_t mod_pow(uint64_t a, uint64_t e, uint64_t q) {
  uint64_t r = 1 % q;
  a %= q;
  while (e) {
    if (e & 1) r = mod_mul(r, a, q);
    a = mod_mul(a, a, q);
    e >>= 1;
  }
  return r;
}

int64_t centered(uint64_t c, uint64_t q) {
  return c > q / 2 ? static_cast<int64_t>(c) - static_cast<int64_t>(q) : static_cast<int64_t>(c);
}

uint64_t from_centered(int64_t v, uint64_t q) {
  int64_t m = v % static_cast<int64_t>(q);
  if (m < 0) m += static_cast<int64_t>(q);
  return static_cast<uint64_t>(m);
}

RingElement poly_add(const RingElement& a, const RingElement& b, const RingParams& p) {
  check_same(a, p);
  check_same(b, p);
  RingElement r = a;
  for (uint32_t i = 0; i < p.d; ++i) r.coeffs[i] = mod_add(r.coeffs[i], b.coeffs[i], p.q);
  return r;
}

RingElement poly_sub(const RingElement& a, const RingElement& b, const RingParams& p) {
  check_same(a, p);
  check_same(b, p);
  RingElement r = a;
  for (uint32_t i = 0; i < p.d; ++i) r.coeffs[i] = mod_sub(r.coeffs[i], b.coeffs[i], p.q);
  return r;
}

RingElement poly_neg(const RingElement& a, const RingParams& p) {
  check_same(a, p);
  RingElement r = a;
  for (uint32_t i = 0; i < p.d; ++i) r.coeffs[i] = r.coeffs[i] ? p.q - r.coeffs[i] : 0;
  return r;
}

RingElement poly_scalar_mul(const RingElement& a, uint64_t s, const RingParams& p) {
  check_same(a, p);
  RingElement r = a;
  s %= p.q;
  for (uint32_t i = 0; i < p.d; ++i) r.coeffs[i] = mod_mul(r.coeffs[i], s, p.q);
  return r;
}

RingElement monomial_mul(const RingElement& a, uint32_t power, bool negate, const RingParams& p) {
  check_same(a, p);
  power %= 2 * p.d;
  RingElement r = ring_zero(p);
  for (uint32_t i = 0; i < p.d; ++i) {
    uint32_t j = i + power;
    bool flip = negate;
    if (j >= 2 * p.d) j -= 2 * p.d;
    if (j >= p.d) {
      j -= p.d;
      flip = !flip;
    }
    uint64_t v = a.coeffs[i];
    r.coeffs[j] = flip ? mod_sub(r.coeffs[j], v, p.q) : mod_add(r.coeffs[j], v, p.q);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Negacyclic NTT. Tables cached per (q, d); psi comes from the params.
// ---------------------------------------------------------------------------

namespace {

struct NttTables {
  std::vector<uint64_t> psi_pows;      // psi^bitrev(i), CT order
  std::vector<uint64_t> psi_inv_pows;  // psi^-bitrev(i), GS order
  uint64_t d_inv;
};

const NttTables& tables_for(const RingParams& p) {
  static std::map<std::pair<uint64_t, uint32_t>, NttTables> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p.q, p.d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  check_params(p);
  if (p.psi == 0 || mod_pow(p.psi, 2 * p.d, p.q) != 1 || mod_pow(p.psi, p.d, p.q) != p.q - 1) {
    throw std::invalid_argument("RingParams: psi is not a primitive 2d-th root of unity");
  }

  NttTables t;
  uint32_t logd = 0;
  while ((1u << logd) < p.d) ++logd;
  t.psi_pows.resize(p.d);
  t.psi_inv_pows.resize(p.d);
  uint64_t psi_inv = mod_pow(p.psi, p.q - 2, p.q);
  for (uint32_t i = 0; i < p.d; ++i) {
    uint32_t rev = 0;
    for (uint32_t b = 0; b < logd; ++b) rev |= ((i >> b) & 1u) << (logd - 1 - b);
    t.psi_pows[i] = mod_pow(p.psi, rev, p.q);
    t.psi_inv_pows[i] = mod_pow(psi_inv, rev, p.q);
  }
  t.d_inv = mod_pow(p.d, p.q - 2, p.q);
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace

void ntt_forward(std::vector<uint64_t>& v, const RingParams& p) {
  const NttTables& tb = tables_for(p);
  const uint64_t q = p.q;
  uint32_t n = p.d;
  for (uint32_t len = n >> 1, m = 1; len >= 1; len >>= 1, m <<= 1) {
    for (uint32_t i = 0; i < m; ++i) {
      uint64_t w = tb.psi_pows[m + i];
      uint32_t base = 2 * i * len;
      for (uint32_t j = base; j < base + len; ++j) {
        uint64_t u = v[j];
        uint64_t t = mod_mul(v[j + len], w, q);
        v[j] = mod_add(u, t, q);
        v[j + len] = mod_sub(u, t, q);
      }
    }
  }
}

void ntt_inverse(std::vector<uint64_t>& v, const RingParams& p) {
  const NttTables& tb = tables_for(p);
  const uint64_t q = p.q;
  uint32_t n = p.d;
  for (uint32_t len = 1, m = n >> 1; m >= 1; len <<= 1, m >>= 1) {
    for (uint32_t i = 0; i < m; ++i) {
      uint64_t w = tb.psi_inv_pows[m + i];
      uint32_t base = 2 * i * len;
      for (uint32_t j = base; j < base + len; ++j) {
        uint64_t u = v[j];
        uint64_t t = v[j + len];
        v[j] = mod_add(u, t, q);
        v[j + len] = mod_mul(mod_sub(u, t, q), w, q);
      }
    }
  }
  for (auto& x : v) x = mod_mul(x, tb.d_inv, q);
}

RingElement poly_mul(const RingElement& a, const RingElement& b, const RingParams& p) {
  check_same(a, p);
  check_same(b, p);
  std::vector<uint64_t> fa = a.coeffs, fb = b.coeffs;
  ntt_forward(fa, p);
  ntt_forward(fb, p);
  for (uint32_t i = 0; i < p.d; ++i) fa[i] = mod_mul(fa[i], fb[i], p.q);
  ntt_inverse(fa, p);
  RingElement r;
  r.coeffs = std::move(fa);
  return r;
}

RingElement poly_mul_schoolbook(const RingElement& a, const RingElement& b, const RingParams& p) {
  check_same(a, p);
  check_same(b, p);
  RingElement r = ring_zero(p);
  for (uint32_t i = 0; i < p.d; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (uint32_t j = 0; j < p.d; ++j) {
      uint64_t prod = mod_mul(a.coeffs[i], b.coeffs[j], p.q);
      uint32_t k = i + j;
      if (k < p.d) {
        r.coeffs[k] = mod_add(r.coeffs[k], prod, p.q);
      } else {
        r.coeffs[k - p.d] = mod_sub(r.coeffs[k - p.d], prod, p.q);  // x^d = -1
      }
    }
  }
  return r;
}

RingElement sample_uniform(const RingParams& p, SeededGenerator& rng) {
  RingElement e = ring_zero(p);
  for (uint32_t i = 0; i < p.d; ++i) e.coeffs[i] = rng.below(p.q);
  return e;
}

int64_t sample_gaussian_scalar(uint32_t sigma, SeededGenerator& rng) {
  if (sigma < 1) throw std::invalid_argument("sigma must be >= 1");
  // Cut-and-reject over [-6*sigma, 6*sigma] against the continuous density.
  const int64_t tail = 6 * static_cast<int64_t>(sigma);
  const double two_sigma_sq = 2.0 * sigma * sigma;
  for (;;) {
    int64_t z = static_cast<int64_t>(rng.below(2 * tail + 1)) - tail;
    double accept = std::exp(-static_cast<double>(z) * z / two_sigma_sq);
    if (rng.unit() < accept) return z;
  }
}

RingElement sample_gaussian(const RingParams& p, SeededGenerator& rng) {
  RingElement e = ring_zero(p);
  for (uint32_t i = 0; i < p.d; ++i) {
    e.coeffs[i] = from_centered(sample_gaussian_scalar(p.sigma, rng), p.q);
  }
  return e;
}

RingElement sample_ternary(const RingParams& p, SeededGenerator& rng) {
  RingElement e = ring_zero(p);
  for (uint32_t i = 0; i < p.d; ++i) {
    uint64_t t = rng.below(3);
    e.coeffs[i] = t == 2 ? p.q - 1 : t;  // {0, 1, q-1}
  }
  return e;
}

uint64_t inf_norm(const RingElement& a, const RingParams& p) {
  check_same(a, p);
  uint64_t m = 0;
  for (uint64_t c : a.coeffs) {
    int64_t v = centered(c, p.q);
    uint64_t av = static_cast<uint64_t>(v < 0 ? -v : v);
    m = std::max(m, av);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Serialization. All integers little-endian.
// ---------------------------------------------------------------------------

void write_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t read_u64(std::span<const uint8_t> in, size_t& off) {
  if (off + 8 > in.size()) throw std::runtime_error("truncated input (u64)");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(in[off + i]) << (8 * i);
  off += 8;
  return v;
}

namespace {
void write_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}
uint16_t read_u16(std::span<const uint8_t> in, size_t& off) {
  if (off + 2 > in.size()) throw std::runtime_error("truncated input (u16)");
  uint16_t v = static_cast<uint16_t>(in[off] | (in[off + 1] << 8));
  off += 2;
  return v;
}
}  // namespace

void write_header(std::vector<uint8_t>& out, const RingParams& p) {
  out.insert(out.end(), {static_cast<uint8_t>('Q'), static_cast<uint8_t>('F'),
                         static_cast<uint8_t>('H'), static_cast<uint8_t>('E')});
  write_u16(out, 1);
  write_u16(out, static_cast<uint16_t>(p.d));
  write_u64(out, p.q);
}

size_t read_header(std::span<const uint8_t> in, FileHeader& h) {
  size_t off = 0;
  if (in.size() < 16 || std::memcmp(in.data(), FileHeader::kMagic, 4) != 0) {
    throw std::runtime_error("bad QFHE header magic");
  }
  off = 4;
  h.version = read_u16(in, off);
  if (h.version != 1) throw std::runtime_error("unsupported QFHE format version");
  h.d = read_u16(in, off);
  h.q = read_u64(in, off);
  return off;
}

void write_element(std::vector<uint8_t>& out, const RingElement& e) {
  for (uint64_t c : e.coeffs) write_u64(out, c);
}

RingElement read_element(std::span<const uint8_t> in, size_t& off, const RingParams& p) {
  RingElement e = ring_zero(p);
  for (uint32_t i = 0; i < p.d; ++i) e.coeffs[i] = read_u64(in, off);
  return e;
}

std::vector<uint8_t> serialize_element(const RingElement& e, const RingParams& p) {
  std::vector<uint8_t> out;
  write_header(out, p);
  write_element(out, e);
  return out;
}

RingElement deserialize_element(std::span<const uint8_t> bytes, RingParams* params_out) {
  FileHeader h;
  size_t off = read_header(bytes, h);
  RingParams p;
  p.d = h.d;
  p.q = h.q;
  if (params_out) *params_out = p;
  return read_element(bytes, off, p);
}

}  // namespace qfhe
