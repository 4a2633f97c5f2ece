#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "nmfft/errors.hpp"
#include "nmfft/grid.hpp"
#include "test_support.hpp"

using namespace nmfft;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("nmfft_test_grid_" + name);
}

}  // namespace

TEST_CASE("in-memory grid basics", "[grid]") {
  auto g = ComplexGrid::in_memory(8);
  CHECK(g.side() == 8);
  CHECK(g.byte_size() == 8 * 8 * 8);
  CHECK_FALSE(g.file_backed());
  g.set(2, 5, {1.5f, -2.0f});
  CHECK(g.at(2, 5) == Complex(1.5f, -2.0f));
  CHECK(g.to_vector()[2 * 8 + 5] == Complex(1.5f, -2.0f));

  CHECK_THROWS_AS(ComplexGrid::in_memory(6), LengthError);
  CHECK_THROWS_AS(ComplexGrid::from_samples(4, ComplexVec(15)), LengthError);
}

TEST_CASE("grid accesses stay inside the grid", "[grid]") {
  auto g = ComplexGrid::in_memory(4);
  ComplexVec two(2);
  CHECK_THROWS_AS(g.write_segment(4, 0, two), std::out_of_range);
  CHECK_THROWS_AS(g.write_segment(0, 3, two), std::out_of_range);
  CHECK_NOTHROW(g.write_segment(3, 2, two));
  ComplexVec rows(8);
  CHECK_THROWS_AS(g.read_rows(3, 2, rows), std::out_of_range);
  CHECK_NOTHROW(g.read_rows(2, 2, rows));
  CHECK_THROWS_AS(g.at(0, 4), std::out_of_range);
}

TEST_CASE("file-backed grid has exactly 8 n^2 bytes of raw c64le", "[grid][file]") {
  const auto path = temp_file("raw.c64");
  {
    auto g = ComplexGrid::create_file(path, 16);
    CHECK(g.file_backed());
    CHECK(fs::file_size(path) == 8u * 16 * 16);
    g.set(0, 1, {1.0f, 2.0f});
  }
  {
    std::ifstream in(path, std::ios::binary);
    float raw[4];
    in.read(reinterpret_cast<char*>(raw), sizeof raw);
    CHECK(raw[0] == 0.0f);
    CHECK(raw[2] == 1.0f);
    CHECK(raw[3] == 2.0f);
  }
  auto reopened = ComplexGrid::open_file(path, 16);
  CHECK(reopened.at(0, 1) == Complex(1.0f, 2.0f));
  CHECK_THROWS_AS(ComplexGrid::open_file(path, 32), IoError);
  CHECK_THROWS_AS(ComplexGrid::open_file(temp_file("missing.c64"), 16), IoError);
  fs::remove(path);
}

TEST_CASE("file scratch grid is removed with its owner", "[grid][file]") {
  const auto path = temp_file("scratch_owner.c64");
  auto g = ComplexGrid::create_file(path, 8);
  fs::path scratch_path;
  {
    auto scratch = g.make_scratch();
    REQUIRE(scratch.path());
    scratch_path = *scratch.path();
    CHECK(fs::exists(scratch_path));
    CHECK(fs::file_size(scratch_path) == 8u * 8 * 8);
    auto moved = std::move(scratch);
    CHECK(fs::exists(scratch_path));
  }
  CHECK_FALSE(fs::exists(scratch_path));
  CHECK(fs::exists(path));
  fs::remove(path);
}

TEST_CASE("descriptor sidecar", "[grid][file]") {
  const auto path = temp_file("desc.c64");
  write_grid_descriptor(path, 256);
  CHECK(read_grid_descriptor(path) == 256);
  {
    std::ofstream out(descriptor_path(path));
    out << "n=64\nelement=c128\n";
  }
  CHECK_THROWS_AS(read_grid_descriptor(path), ParseError);
  {
    std::ofstream out(descriptor_path(path));
    out << "n=abc\n";
  }
  CHECK_THROWS_AS(read_grid_descriptor(path), ParseError);
  fs::remove(descriptor_path(path));
}
