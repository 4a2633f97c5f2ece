#include "nmfft/grid.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>

#include "nmfft/errors.hpp"

namespace nmfft {

static_assert(std::endian::native == std::endian::little,
              "grid files are raw little-endian float32; big-endian hosts need a byte-swapping backend");

namespace {

class MemoryStorage final : public GridStorage {
 public:
  explicit MemoryStorage(ComplexVec samples) : samples_(std::move(samples)) {}

  void read(std::size_t offset, std::span<Complex> out) const override {
    std::copy_n(samples_.begin() + static_cast<std::ptrdiff_t>(offset), out.size(), out.begin());
  }
  void write(std::size_t offset, std::span<const Complex> in) override {
    std::copy(in.begin(), in.end(), samples_.begin() + static_cast<std::ptrdiff_t>(offset));
  }
  bool file_backed() const noexcept override { return false; }

 private:
  ComplexVec samples_;
};

std::string errno_message(const std::string& what, const std::filesystem::path& path) {
  return what + " '" + path.string() + "': " + std::strerror(errno);
}

// pread/pwrite carry their own offset, so disjoint regions can be accessed
// from several threads through one descriptor.
class FileStorage final : public GridStorage {
 public:
  FileStorage(const std::filesystem::path& path, int flags) : path_(path) {
    fd_ = ::open(path.c_str(), flags | O_CLOEXEC, 0644);
    if (fd_ < 0) throw IoError(errno_message("cannot open grid file", path));
  }
  ~FileStorage() override {
    if (fd_ >= 0) ::close(fd_);
  }
  FileStorage(const FileStorage&) = delete;
  FileStorage& operator=(const FileStorage&) = delete;

  std::uint64_t length() const {
    struct stat st {};
    if (::fstat(fd_, &st) != 0) throw IoError(errno_message("cannot stat", path_));
    return static_cast<std::uint64_t>(st.st_size);
  }

  void resize(std::uint64_t bytes) {
    if (::ftruncate(fd_, static_cast<off_t>(bytes)) != 0) {
      throw IoError(errno_message("cannot size grid file", path_));
    }
  }

  void read(std::size_t offset, std::span<Complex> out) const override {
    auto* dst = reinterpret_cast<char*>(out.data());
    std::size_t remaining = out.size_bytes();
    auto pos = static_cast<off_t>(offset * kSampleBytes);
    while (remaining > 0) {
      const ssize_t got = ::pread(fd_, dst, remaining, pos);
      if (got < 0 && errno == EINTR) continue;
      if (got <= 0) throw IoError(errno_message("short read from", path_));
      dst += got;
      pos += got;
      remaining -= static_cast<std::size_t>(got);
    }
  }

  void write(std::size_t offset, std::span<const Complex> in) override {
    const auto* src = reinterpret_cast<const char*>(in.data());
    std::size_t remaining = in.size_bytes();
    auto pos = static_cast<off_t>(offset * kSampleBytes);
    while (remaining > 0) {
      const ssize_t put = ::pwrite(fd_, src, remaining, pos);
      if (put < 0 && errno == EINTR) continue;
      if (put <= 0) throw IoError(errno_message("short write to", path_));
      src += put;
      pos += put;
      remaining -= static_cast<std::size_t>(put);
    }
  }

  bool file_backed() const noexcept override { return true; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

void check_side(std::size_t n) {
  if (!is_power_of_two(n)) {
    throw LengthError("grid side " + std::to_string(n) + " is not a power of two");
  }
}

}  // namespace

ComplexGrid::ComplexGrid(std::size_t n, std::unique_ptr<GridStorage> storage,
                         std::optional<std::filesystem::path> path, bool remove_on_close)
    : n_(n), storage_(std::move(storage)), path_(std::move(path)),
      remove_on_close_(remove_on_close) {}

ComplexGrid::~ComplexGrid() {
  if (!storage_) return;  // moved-from
  storage_.reset();
  if (remove_on_close_ && path_) {
    std::error_code ec;
    std::filesystem::remove(*path_, ec);
  }
}

ComplexGrid ComplexGrid::in_memory(std::size_t n) {
  check_side(n);
  return ComplexGrid(n, std::make_unique<MemoryStorage>(ComplexVec(n * n)), std::nullopt, false);
}

ComplexGrid ComplexGrid::from_samples(std::size_t n, ComplexVec samples) {
  check_side(n);
  if (samples.size() != n * n) {
    throw LengthError("expected " + std::to_string(n * n) + " samples, got " +
                      std::to_string(samples.size()));
  }
  return ComplexGrid(n, std::make_unique<MemoryStorage>(std::move(samples)), std::nullopt, false);
}

ComplexGrid ComplexGrid::create_file(const std::filesystem::path& path, std::size_t n) {
  check_side(n);
  auto storage = std::make_unique<FileStorage>(path, O_RDWR | O_CREAT | O_TRUNC);
  storage->resize(static_cast<std::uint64_t>(n) * n * kSampleBytes);
  return ComplexGrid(n, std::move(storage), path, false);
}

ComplexGrid ComplexGrid::open_file(const std::filesystem::path& path, std::size_t n) {
  check_side(n);
  auto storage = std::make_unique<FileStorage>(path, O_RDWR);
  const std::uint64_t expected = static_cast<std::uint64_t>(n) * n * kSampleBytes;
  if (storage->length() != expected) {
    throw IoError("grid file '" + path.string() + "' has " +
                  std::to_string(storage->length()) + " bytes, expected " +
                  std::to_string(expected) + " for n=" + std::to_string(n));
  }
  return ComplexGrid(n, std::move(storage), path, false);
}

void ComplexGrid::check_region(std::size_t row, std::size_t col0, std::size_t len) const {
  if (row >= n_ || col0 > n_ || len > n_ - col0) {
    throw std::out_of_range("grid access row=" + std::to_string(row) +
                            " col=" + std::to_string(col0) + " len=" +
                            std::to_string(len) + " outside " + std::to_string(n_) +
                            "x" + std::to_string(n_));
  }
}

void ComplexGrid::read_rows(std::size_t row0, std::size_t count, std::span<Complex> out) const {
  if (count == 0) return;
  if (row0 >= n_ || count > n_ - row0 || out.size() != count * n_) {
    throw std::out_of_range("row block [" + std::to_string(row0) + ", " +
                            std::to_string(row0 + count) + ") outside grid or buffer mismatch");
  }
  storage_->read(row0 * n_, out);
}

void ComplexGrid::write_segment(std::size_t row, std::size_t col0, std::span<const Complex> in) {
  check_region(row, col0, in.size());
  storage_->write(row * n_ + col0, in);
}

Complex ComplexGrid::at(std::size_t row, std::size_t col) const {
  check_region(row, col, 1);
  Complex value;
  storage_->read(row * n_ + col, std::span<Complex>(&value, 1));
  return value;
}

void ComplexGrid::set(std::size_t row, std::size_t col, Complex value) {
  write_segment(row, col, std::span<const Complex>(&value, 1));
}

ComplexVec ComplexGrid::to_vector() const {
  ComplexVec out(sample_count());
  read_rows(0, n_, out);
  return out;
}

ComplexGrid ComplexGrid::make_scratch() const {
  if (!file_backed()) return in_memory(n_);
  auto scratch_path = *path_;
  scratch_path += ".scratch";
  auto storage = std::make_unique<FileStorage>(scratch_path, O_RDWR | O_CREAT | O_TRUNC);
  storage->resize(static_cast<std::uint64_t>(n_) * n_ * kSampleBytes);
  return ComplexGrid(n_, std::move(storage), scratch_path, true);
}

std::filesystem::path descriptor_path(const std::filesystem::path& grid_path) {
  auto p = grid_path;
  p += ".desc";
  return p;
}

void write_grid_descriptor(const std::filesystem::path& grid_path, std::size_t n) {
  const auto p = descriptor_path(grid_path);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write descriptor '" + p.string() + "'");
  out << "n=" << n << "\n" << "element=c64le\n";
  if (!out) throw IoError("cannot write descriptor '" + p.string() + "'");
}

std::size_t read_grid_descriptor(const std::filesystem::path& grid_path) {
  const auto p = descriptor_path(grid_path);
  std::ifstream in(p);
  if (!in) throw IoError("cannot read descriptor '" + p.string() + "'");
  std::optional<std::size_t> n;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 1);
    if (key == "n") {
      std::size_t pos = 0;
      try {
        n = std::stoull(value, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != value.size()) throw ParseError(line_no, "bad grid side '" + value + "'");
    } else if (key == "element") {
      if (value != "c64le") throw ParseError(line_no, "unsupported element type '" + value + "'");
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  if (!n) throw ParseError(line_no, "descriptor has no 'n' entry");
  return *n;
}

ComplexGrid copy_to_memory(const ComplexGrid& grid) {
  return ComplexGrid::from_samples(grid.side(), grid.to_vector());
}

}  // namespace nmfft
