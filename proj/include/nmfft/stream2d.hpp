#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nmfft/fft.hpp"
#include "nmfft/grid.hpp"

namespace nmfft {

// Row blocking for the streamed transform. k rows are staged at a time, with
// k equal to the number of samples that fit in one memory access vector, so
// every transposed write-back is exactly one access wide.
class TileParams {
 public:
  // 32-byte (256-bit) access, k = 4.
  TileParams() = default;

  // Throws ValidationError unless bytes is a positive multiple of kSampleBytes.
  static TileParams from_access_width(std::size_t bytes);
  static TileParams with_rows(std::size_t k);

  std::size_t rows() const noexcept { return k_; }
  std::size_t access_width_bytes() const noexcept { return k_ * kSampleBytes; }

  // Throws ValidationError unless k divides n.
  void check_divides(std::size_t n) const;

 private:
  explicit TileParams(std::size_t k) : k_(k) {}
  std::size_t k_ = 4;
};

struct PassTrace {
  std::uint64_t bytes_read = 0;
  std::uint64_t bytes_written = 0;
  std::uint64_t blocks = 0;
  std::uint64_t read_ops = 0;
  std::uint64_t write_ops = 0;
  // Orientation of the pass output relative to the original input.
  bool output_transposed = false;
};

struct BlockRecord {
  unsigned pass = 0;
  std::size_t block = 0;
  std::size_t first_row = 0;
  unsigned worker = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t bytes_written = 0;
};

struct StreamTrace {
  std::array<PassTrace, 2> passes{};
  // Largest amount of staging memory live at once across all workers.
  std::uint64_t peak_staging_bytes = 0;
  // Per-block records, filled only when StreamOptions::record_blocks is set.
  // Sorted by (pass, block).
  std::vector<BlockRecord> blocks;

  std::uint64_t total_bytes() const noexcept;
  std::uint64_t total_blocks() const noexcept;
  bool final_transposed() const noexcept { return passes[1].output_transposed; }
};

struct StreamOptions {
  unsigned threads = 1;
  bool record_blocks = false;
};

// Row FFTs, full in-memory transpose, row FFTs, transpose back. In-memory
// grids only.
ComplexGrid fft2d_reference(const ComplexGrid& grid, Direction dir);

// Two passes of (k-row 1D FFTs, transposed write-back in k x k tiles). The
// first pass streams `grid` into a scratch grid of the same backend, the second
// streams it back, so the result replaces `grid` in its original orientation.
// File-backed grids never have more than one k-row block per worker resident.
StreamTrace fft2d_streamed(ComplexGrid& grid, TileParams tile, Direction dir,
                           const StreamOptions& options = {});

// dst[i][j] = src[j][i], staged through k x k tiles. dst must have the same
// side as src and must not alias it.
StreamTrace transpose_blocked(const ComplexGrid& src, ComplexGrid& dst, TileParams tile,
                              const StreamOptions& options = {});
ComplexGrid transpose_blocked(const ComplexGrid& src, TileParams tile);

}  // namespace nmfft
