#pragma once

#include <cmath>
#include <cstdint>

namespace hesseq {

// Deterministic splitmix64 generator. All sampled verification flows from a
// single config seed through named substreams, one per (stream, sample index)
// pair, so reductions over samples are order-independent and reports do not
// depend on how work is partitioned.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  // Standard normal via Box-Muller (no cached spare, keeps the stream strict).
  double normal() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  // Log-uniform in [a, b], a > 0.
  double log_uniform(double a, double b) {
    return a * std::pow(b / a, next_double());
  }

 private:
  std::uint64_t state_;
};

// Independent substream for sample `index` of stream `stream` under `seed`.
inline Rng substream(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t index) {
  std::uint64_t s = seed;
  s ^= 0x9e3779b97f4a7c15ULL + (stream << 1);
  s *= 0xff51afd7ed558ccdULL;
  s ^= index + 0xc4ceb9fe1a85ec53ULL;
  s *= 0xc4ceb9fe1a85ec53ULL;
  s ^= s >> 33;
  return Rng(s);
}

}  // namespace hesseq
