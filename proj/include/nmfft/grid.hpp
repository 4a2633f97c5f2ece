#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>

#include "nmfft/fft.hpp"

namespace nmfft {

inline constexpr std::size_t kSampleBytes = sizeof(Complex);  // complex64
static_assert(kSampleBytes == 8);

// Storage behind a ComplexGrid. Offsets and lengths are in samples, row-major.
// Implementations must allow concurrent calls on disjoint regions.
class GridStorage {
 public:
  virtual ~GridStorage() = default;

  virtual void read(std::size_t offset, std::span<Complex> out) const = 0;
  virtual void write(std::size_t offset, std::span<const Complex> in) = 0;
  virtual bool file_backed() const noexcept = 0;
};

// Square n x n complex64 matrix, either held in memory or stored in a raw
// little-endian file of exactly 8*n*n bytes (interleaved re,im float32, no
// header). Move-only: the grid owns its storage.
class ComplexGrid {
 public:
  static ComplexGrid in_memory(std::size_t n);
  static ComplexGrid from_samples(std::size_t n, ComplexVec samples);

  // Creates (or truncates) `path` to a zero-filled grid.
  static ComplexGrid create_file(const std::filesystem::path& path, std::size_t n);
  // Opens an existing grid file; its length must be exactly 8*n*n bytes.
  static ComplexGrid open_file(const std::filesystem::path& path, std::size_t n);

  ComplexGrid(ComplexGrid&&) noexcept = default;
  ComplexGrid& operator=(ComplexGrid&&) noexcept = default;
  ~ComplexGrid();

  std::size_t side() const noexcept { return n_; }
  std::size_t sample_count() const noexcept { return n_ * n_; }
  std::size_t byte_size() const noexcept { return sample_count() * kSampleBytes; }
  bool file_backed() const noexcept { return storage_->file_backed(); }
  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

  // Reads `count` full rows starting at `row0` into `out` (count*n samples).
  void read_rows(std::size_t row0, std::size_t count, std::span<Complex> out) const;
  // Writes `in` into row `row` starting at column `col0`.
  void write_segment(std::size_t row, std::size_t col0, std::span<const Complex> in);

  Complex at(std::size_t row, std::size_t col) const;
  void set(std::size_t row, std::size_t col, Complex value);

  ComplexVec to_vector() const;
  // Same backend kind and side. File-backed scratch lives next to the
  // original file and is deleted when the returned grid is destroyed.
  ComplexGrid make_scratch() const;

 private:
  ComplexGrid(std::size_t n, std::unique_ptr<GridStorage> storage,
              std::optional<std::filesystem::path> path, bool remove_on_close);

  void check_region(std::size_t row, std::size_t col0, std::size_t len) const;

  std::size_t n_ = 0;
  std::unique_ptr<GridStorage> storage_;
  std::optional<std::filesystem::path> path_;
  bool remove_on_close_ = false;
};

// Writes the `<path>.desc` sidecar (key=value lines: n, element=c64le).
void write_grid_descriptor(const std::filesystem::path& grid_path, std::size_t n);
// Reads `n` back from a sidecar; throws ParseError/IoError.
std::size_t read_grid_descriptor(const std::filesystem::path& grid_path);
std::filesystem::path descriptor_path(const std::filesystem::path& grid_path);

// Copies any grid into a new in-memory grid.
ComplexGrid copy_to_memory(const ComplexGrid& grid);

}  // namespace nmfft
