#ifndef MATMI_RNG_HPP
#define MATMI_RNG_HPP

#include <cstdint>

namespace matmi {

// splitmix64: tiny, seedable, identical output on every platform. Used
// wherever reproducibility across builds matters (noise fields, start
// vectors); quality is ample for these purposes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [-1, 1).
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

 private:
  std::uint64_t state_;
};

}  // namespace matmi

#endif
