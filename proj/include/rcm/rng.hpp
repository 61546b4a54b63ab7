#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

// Deterministic randomness for the whole simulator.
//
// Two primitives, both fixed-width integer arithmetic and therefore
// bit-reproducible across platforms and thread counts:
//
//  * Philox4x32-10 — counter-based block generator. Every consumer of
//    uniforms (per-cube point streams, mark draws, per-replication seeds)
//    addresses an independent slice of the counter space, keyed by
//    (master seed, purpose tag, cube index, replica). Nothing is stateful
//    beyond a local cursor, which is what makes cube-local sampling and
//    deterministic parallel reduction possible.
//
//  * SipHash-2-4 — keyed PRF producing the simplex acceptance variables
//    u(sigma). The key is the 128-bit stream key of the owning vertex, the
//    message is (j, coordinates of the other j vertices); see complex.hpp.

namespace rcm {

struct Key128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  friend bool operator==(const Key128&, const Key128&) = default;
};

// ---------------------------------------------------------------------------
// Philox4x32-10
// ---------------------------------------------------------------------------

namespace detail {
inline void philox_round(std::array<std::uint32_t, 4>& x, const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = 0xD2511F53ull * x[0];
  const std::uint64_t p1 = 0xCD9E8D57ull * x[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  x = {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}
}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    detail::philox_round(ctr, key);
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
  }
  return ctr;
}

// One block addressed by two 64-bit counter words.
inline Key128 philox_block(Key128 key, std::uint64_t c0, std::uint64_t c1) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(c0), static_cast<std::uint32_t>(c0 >> 32),
      static_cast<std::uint32_t>(c1), static_cast<std::uint32_t>(c1 >> 32)};
  // Fold the 128-bit key into the 64-bit Philox key plus the counter's unused
  // entropy-free structure: mix hi into the key words.
  const std::array<std::uint32_t, 2> k = {
      static_cast<std::uint32_t>(key.lo ^ (key.hi << 1)),
      static_cast<std::uint32_t>((key.lo >> 32) ^ (key.hi >> 31))};
  const auto out = philox4x32(ctr, k);
  return Key128{(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
                (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

// Map 64 bits to [0,1) with full 53-bit mantissa resolution.
inline double u64_to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// Purpose tags separating counter sub-spaces. Values are arbitrary but frozen:
// changing them changes every sampled realization.
enum : std::uint64_t {
  kTagPoints = 0x706f696e74730001ull,     // per-cube point/mark stream
  kTagStreamKey = 0x73747265616d0002ull,  // per-point 128-bit stream keys
  kTagOrigin = 0x6f726967696e0003ull,     // the added origin point
  kTagSample = 0x73616d706c650004ull,     // per-(cell, replication) seeds
  kTagBootstrap = 0x626f6f7473740005ull,  // bootstrap resampling
  kTagVerify = 0x7665726966790006ull,     // V1/V2 verification tuples
};

// Derive the Philox key of the stream identified by (seed, tag, unit, replica).
inline Key128 derive_stream_key(std::uint64_t seed, std::uint64_t tag, std::uint64_t unit,
                                std::uint64_t replica) {
  const Key128 master{seed, tag};
  return philox_block(master, unit, replica);
}

// A buffered uniform source over one derived stream. Counter word c1 stays
// below 2^62; the range above it is reserved for per-point stream keys.
class CounterStream {
 public:
  explicit CounterStream(Key128 key) : key_(key) {}

  std::uint32_t next_u32() {
    if (have_ == 0) refill();
    return buf_[static_cast<size_t>(--have_)];
  }
  std::uint64_t next_u64() {
    const std::uint64_t a = next_u32();
    const std::uint64_t b = next_u32();
    return (a << 32) | b;
  }
  double next_unit() { return u64_to_unit(next_u64()); }

 private:
  void refill() {
    const Key128 block = philox_block(key_, 0, counter_++);
    buf_[0] = static_cast<std::uint32_t>(block.lo);
    buf_[1] = static_cast<std::uint32_t>(block.lo >> 32);
    buf_[2] = static_cast<std::uint32_t>(block.hi);
    buf_[3] = static_cast<std::uint32_t>(block.hi >> 32);
    have_ = 4;
  }

  Key128 key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int have_ = 0;
};

// 128-bit stream key of the k-th point drawn in a unit's stream (counter space
// disjoint from CounterStream by the 2^62 offset).
inline Key128 point_stream_key(Key128 unit_key, std::uint64_t draw_index) {
  return philox_block(unit_key, 1, (1ull << 62) + draw_index);
}

// One derived 64-bit value, used for per-replication master seeds.
inline std::uint64_t derive_u64(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                                std::uint64_t b) {
  return philox_block(Key128{seed, tag}, a, b).lo;
}

// Exact Poisson sampling by CDF inversion from a single uniform. Sequential
// search is fine at desk scale (lambda below a few hundred).
inline int poisson_inverse(double lambda, double u) {
  if (lambda < 0.0) throw std::invalid_argument("poisson_inverse: negative mean");
  if (lambda == 0.0) return 0;
  if (lambda > 700.0) throw std::invalid_argument("poisson_inverse: mean too large for inversion");
  int k = 0;
  double p = std::exp(-lambda);
  double cum = p;
  while (u >= cum) {
    ++k;
    p *= lambda / k;
    cum += p;
    if (k > 2000000) break;  // unreachable for sane inputs; guards u==1 pathologies
  }
  return k;
}

// ---------------------------------------------------------------------------
// SipHash-2-4 (64-bit output), reference algorithm.
// ---------------------------------------------------------------------------

namespace detail {
inline std::uint64_t rotl64(std::uint64_t x, int b) { return (x << b) | (x >> (64 - b)); }

struct SipState {
  std::uint64_t v0, v1, v2, v3;
  void round() {
    v0 += v1; v1 = rotl64(v1, 13); v1 ^= v0; v0 = rotl64(v0, 32);
    v2 += v3; v3 = rotl64(v3, 16); v3 ^= v2;
    v0 += v3; v3 = rotl64(v3, 21); v3 ^= v0;
    v2 += v1; v1 = rotl64(v1, 17); v1 ^= v2; v2 = rotl64(v2, 32);
  }
};
}  // namespace detail

inline std::uint64_t siphash24(Key128 key, const std::uint8_t* msg, size_t len) {
  detail::SipState s{0x736f6d6570736575ull ^ key.lo, 0x646f72616e646f6dull ^ key.hi,
                     0x6c7967656e657261ull ^ key.lo, 0x7465646279746573ull ^ key.hi};
  const size_t full = len / 8;
  for (size_t i = 0; i < full; ++i) {
    std::uint64_t m;
    std::memcpy(&m, msg + 8 * i, 8);
    s.v3 ^= m;
    s.round();
    s.round();
    s.v0 ^= m;
  }
  std::uint64_t last = static_cast<std::uint64_t>(len & 0xff) << 56;
  for (size_t i = 0; i < (len & 7); ++i)
    last |= static_cast<std::uint64_t>(msg[full * 8 + i]) << (8 * i);
  s.v3 ^= last;
  s.round();
  s.round();
  s.v0 ^= last;
  s.v2 ^= 0xff;
  s.round();
  s.round();
  s.round();
  s.round();
  return s.v0 ^ s.v1 ^ s.v2 ^ s.v3;
}

// PRF evaluation of u(sigma): key = stream key of the owning vertex,
// message = level j followed by the (m,l) coordinates of the other vertices.
inline double prf_unit(Key128 owner_key, std::uint32_t level,
                       std::span<const std::pair<std::uint64_t, std::uint64_t>> coords) {
  std::vector<std::uint8_t> msg(4 + coords.size() * 16);
  std::memcpy(msg.data(), &level, 4);
  size_t off = 4;
  for (const auto& [m, l] : coords) {
    std::memcpy(msg.data() + off, &m, 8);
    std::memcpy(msg.data() + off + 8, &l, 8);
    off += 16;
  }
  return u64_to_unit(siphash24(owner_key, msg.data(), msg.size()));
}

}  // namespace rcm
