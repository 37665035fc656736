#pragma once

#include <array>
#include <cstdint>

namespace greenlab {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) noexcept;
};

// Stream purposes keep draws for different consumers disjoint under one seed.
enum class Purpose : std::uint32_t {
  sampler = 1,
  orbits = 2,
  transfer_paths = 3,
  shift_mirror = 4,
  synthetic = 5,
  oracle_tables = 6,
};

// Counter-based stream identified by (seed, purpose, index). Draw k of a stream
// is a pure function of those four values, so per-orbit streams are independent
// of scheduling.
class Stream {
 public:
  Stream(std::uint64_t seed, Purpose purpose, std::uint64_t index) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  // Uniform integer in [0, n).
  int below(int n) noexcept;

 private:
  Philox4x32::Key key_;
  Philox4x32::Counter base_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
};

}  // namespace greenlab
