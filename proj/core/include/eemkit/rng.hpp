#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace eemkit {

// splitmix64, the standard seed mixer from Vigna's xoshiro reference code.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent stream seed from a base seed and stream tags.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag_a,
                                 std::uint64_t tag_b = 0, std::uint64_t tag_c = 0) {
  std::uint64_t s = base;
  std::uint64_t out = splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (tag_a + 1);
  out ^= splitmix64(s);
  s ^= 0xc2b2ae3d27d4eb4fULL * (tag_b + 1);
  out ^= splitmix64(s);
  s ^= 0x165667b19e3779f9ULL * (tag_c + 1);
  out ^= splitmix64(s);
  return out;
}

// Deterministic, platform-independent generator. Distributions are hand-rolled
// (standard-library distributions are implementation-defined, which would break
// the bit-reproducibility contract of the evaluation harness).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : s_(seed) {
    // decorrelate trivially related seeds
    for (int i = 0; i < 4; ++i) (void)splitmix64(s_);
  }

  std::uint64_t next_u64() { return splitmix64(s_); }

  // uniform on [0, 1) with 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; consumes exactly two uniforms per pair
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // index in [0, n)
  std::size_t index(std::size_t n) {
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return static_cast<std::size_t>(x % n);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    shuffle(p);
    return p;
  }

private:
  std::uint64_t s_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace eemkit
