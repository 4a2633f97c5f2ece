#include "nmfft/stream2d.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "nmfft/errors.hpp"

namespace nmfft {

TileParams TileParams::from_access_width(std::size_t bytes) {
  if (bytes == 0 || bytes % kSampleBytes != 0) {
    throw ValidationError("access_width_bytes",
                          std::to_string(bytes) + " is not a positive multiple of the " +
                              std::to_string(kSampleBytes) + "-byte sample");
  }
  return TileParams(bytes / kSampleBytes);
}

TileParams TileParams::with_rows(std::size_t k) {
  if (k == 0) throw ValidationError("k", "rows per block must be positive");
  return TileParams(k);
}

void TileParams::check_divides(std::size_t n) const {
  if (n % k_ != 0) {
    throw ValidationError("k", "k=" + std::to_string(k_) + " does not divide n=" +
                                   std::to_string(n));
  }
}

std::uint64_t StreamTrace::total_bytes() const noexcept {
  std::uint64_t total = 0;
  for (const auto& p : passes) total += p.bytes_read + p.bytes_written;
  return total;
}

std::uint64_t StreamTrace::total_blocks() const noexcept {
  return passes[0].blocks + passes[1].blocks;
}

namespace {

// Tracks live staging allocations so a run can report its peak footprint.
class StagingMeter {
 public:
  class Lease {
   public:
    Lease(StagingMeter& meter, std::uint64_t bytes) : meter_(meter), bytes_(bytes) {
      meter_.acquire(bytes_);
    }
    ~Lease() { meter_.release(bytes_); }
    Lease(const Lease&) = delete;
    Lease& operator=(const Lease&) = delete;

   private:
    StagingMeter& meter_;
    std::uint64_t bytes_;
  };

  std::uint64_t peak() const noexcept { return peak_.load(); }

 private:
  void acquire(std::uint64_t bytes) {
    const auto now = live_.fetch_add(bytes) + bytes;
    auto seen = peak_.load();
    while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
    }
  }
  void release(std::uint64_t bytes) { live_.fetch_sub(bytes); }

  std::atomic<std::uint64_t> live_{0};
  std::atomic<std::uint64_t> peak_{0};
};

// One streaming pass: for every k-row block of `src`, optionally FFT each row,
// then write the block transposed into `dst` one k x k tile at a time.
// Blocks are dealt to workers round-robin; each block writes a disjoint
// column band of `dst`.
PassTrace run_pass(const ComplexGrid& src, ComplexGrid& dst, TileParams tile,
                   const FftPlan* plan, Direction dir, unsigned pass_index,
                   const StreamOptions& options, StagingMeter& meter,
                   std::vector<BlockRecord>& records) {
  const std::size_t n = src.side();
  const std::size_t k = tile.rows();
  const std::size_t block_count = n / k;
  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(options.threads, 1, block_count));

  std::vector<PassTrace> per_worker(workers);
  std::vector<std::vector<BlockRecord>> worker_records(workers);
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](unsigned w) {
    try {
      StagingMeter::Lease rows_lease(meter, k * n * kSampleBytes);
      StagingMeter::Lease tile_lease(meter, k * k * kSampleBytes);
      ComplexVec rows(k * n);
      ComplexVec tile_buf(k * k);
      PassTrace& trace = per_worker[w];

      for (std::size_t b = w; b < block_count; b += workers) {
        const std::size_t row0 = b * k;
        src.read_rows(row0, k, rows);
        trace.bytes_read += rows.size() * kSampleBytes;
        trace.read_ops += 1;

        if (plan != nullptr) {
          for (std::size_t r = 0; r < k; ++r) {
            plan->execute(std::span<Complex>(rows).subspan(r * n, n), dir);
          }
        }

        std::uint64_t written = 0;
        for (std::size_t t = 0; t < n / k; ++t) {
          // tile_buf[c][r] = rows[r][t*k + c]
          for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) {
              tile_buf[c * k + r] = rows[r * n + t * k + c];
            }
          }
          for (std::size_t c = 0; c < k; ++c) {
            dst.write_segment(t * k + c, row0,
                              std::span<const Complex>(tile_buf).subspan(c * k, k));
            written += k * kSampleBytes;
            trace.write_ops += 1;
          }
        }
        trace.bytes_written += written;
        trace.blocks += 1;
        if (options.record_blocks) {
          worker_records[w].push_back(BlockRecord{pass_index, b, row0, w,
                                                  rows.size() * kSampleBytes, written});
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  PassTrace total;
  for (const auto& t : per_worker) {
    total.bytes_read += t.bytes_read;
    total.bytes_written += t.bytes_written;
    total.blocks += t.blocks;
    total.read_ops += t.read_ops;
    total.write_ops += t.write_ops;
  }
  for (auto& wr : worker_records) records.insert(records.end(), wr.begin(), wr.end());
  return total;
}

void sort_records(std::vector<BlockRecord>& records) {
  std::sort(records.begin(), records.end(), [](const BlockRecord& a, const BlockRecord& b) {
    return a.pass != b.pass ? a.pass < b.pass : a.block < b.block;
  });
}

void transpose_in_memory(ComplexVec& data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) std::swap(data[i * n + j], data[j * n + i]);
  }
}

}  // namespace

ComplexGrid fft2d_reference(const ComplexGrid& grid, Direction dir) {
  if (grid.file_backed()) {
    throw ValidationError("backend", "fft2d_reference requires an in-memory grid");
  }
  const std::size_t n = grid.side();
  const FftPlan plan(n);
  ComplexVec data = grid.to_vector();
  for (int round = 0; round < 2; ++round) {
    for (std::size_t r = 0; r < n; ++r) {
      plan.execute(std::span<Complex>(data).subspan(r * n, n), dir);
    }
    transpose_in_memory(data, n);
  }
  return ComplexGrid::from_samples(n, std::move(data));
}

StreamTrace fft2d_streamed(ComplexGrid& grid, TileParams tile, Direction dir,
                           const StreamOptions& options) {
  const std::size_t n = grid.side();
  tile.check_divides(n);
  const FftPlan plan(n);

  StagingMeter meter;
  StreamTrace trace;
  ComplexGrid scratch = grid.make_scratch();

  trace.passes[0] = run_pass(grid, scratch, tile, &plan, dir, 0, options, meter, trace.blocks);
  trace.passes[0].output_transposed = true;
  trace.passes[1] = run_pass(scratch, grid, tile, &plan, dir, 1, options, meter, trace.blocks);
  trace.passes[1].output_transposed = !trace.passes[0].output_transposed;

  trace.peak_staging_bytes = meter.peak();
  sort_records(trace.blocks);
  return trace;
}

StreamTrace transpose_blocked(const ComplexGrid& src, ComplexGrid& dst, TileParams tile,
                              const StreamOptions& options) {
  if (src.side() != dst.side()) {
    throw ValidationError("dst", "transpose destination has side " +
                                     std::to_string(dst.side()) + ", expected " +
                                     std::to_string(src.side()));
  }
  if (&src == &dst) throw ValidationError("dst", "transpose destination aliases source");
  tile.check_divides(src.side());

  StagingMeter meter;
  StreamTrace trace;
  trace.passes[0] = run_pass(src, dst, tile, nullptr, Direction::forward, 0, options, meter,
                             trace.blocks);
  trace.passes[0].output_transposed = true;
  trace.passes[1].output_transposed = true;
  trace.peak_staging_bytes = meter.peak();
  sort_records(trace.blocks);
  return trace;
}

ComplexGrid transpose_blocked(const ComplexGrid& src, TileParams tile) {
  ComplexGrid dst = ComplexGrid::in_memory(src.side());
  transpose_blocked(src, dst, tile);
  return dst;
}

}  // namespace nmfft
