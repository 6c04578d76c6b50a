#include "screenlab/parallel.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <numeric>
#include <vector>

#include "screenlab/random.hpp"

using namespace screenlab;

TEST(ParallelChunks, CoversRangeOnce) {
  for (unsigned threads : {1u, 3u, 16u}) {
    set_thread_override(threads);
    const std::size_t n = 3 * kChunkSize + 17;
    std::vector<std::atomic<int>> hits(n);
    parallel_chunks(n, [&](std::size_t, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) ++hits[i];
    });
    for (const auto& h : hits) ASSERT_EQ(h.load(), 1);
  }
  set_thread_override(0);
  EXPECT_EQ(chunk_count(0), 0u);
  EXPECT_EQ(chunk_count(1), 1u);
  EXPECT_EQ(chunk_count(kChunkSize + 1), 2u);
}

TEST(ParallelChunks, ChunkReductionIndependentOfThreads) {
  auto run = [](unsigned threads) {
    set_thread_override(threads);
    const std::size_t n = 100000;
    std::vector<double> parts(chunk_count(n));
    parallel_chunks(n, [&](std::size_t c, std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        Rng rng = Rng::stream(5, i);
        parts[c] += rng.normal();
      }
    });
    return std::accumulate(parts.begin(), parts.end(), 0.0);
  };
  const double one = run(1);
  EXPECT_EQ(one, run(4));
  EXPECT_EQ(one, run(16));
  set_thread_override(0);
}

TEST(Rng, StreamsAreReproducible) {
  Rng a = Rng::stream(1, 42), b = Rng::stream(1, 42), c = Rng::stream(2, 42);
  EXPECT_EQ(a(), b());
  EXPECT_NE(Rng::stream(1, 42)(), c());
  Rng u(7);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    ASSERT_GE(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}
