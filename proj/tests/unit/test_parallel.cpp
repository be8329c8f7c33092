#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "bondkit/parallel.hpp"

namespace bondkit {
namespace {

class ThreadsEnv : public ::testing::Test {
 protected:
  void TearDown() override { unsetenv("BONDKIT_THREADS"); }
};

TEST_F(ThreadsEnv, CountHonoursVariable) {
  setenv("BONDKIT_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  setenv("BONDKIT_THREADS", "0", 1);
  EXPECT_GE(thread_count(), 1u);
  setenv("BONDKIT_THREADS", "junk", 1);
  EXPECT_GE(thread_count(), 1u);
  unsetenv("BONDKIT_THREADS");
  EXPECT_GE(thread_count(), 1u);
}

TEST_F(ThreadsEnv, EveryIndexVisitedOnce) {
  for (const char* n : {"1", "4"}) {
    setenv("BONDKIT_THREADS", n, 1);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST_F(ThreadsEnv, EmptyRangeDoesNothing) {
  bool called = false;
  parallel_for(0, [&](std::size_t) { called = true; });
  EXPECT_FALSE(called);
}

TEST_F(ThreadsEnv, ExceptionReachesCaller) {
  for (const char* n : {"1", "4"}) {
    setenv("BONDKIT_THREADS", n, 1);
    EXPECT_THROW(parallel_for(50,
                              [](std::size_t i) {
                                if (i == 17) throw std::runtime_error("boom");
                              }),
                 std::runtime_error);
  }
}

}  // namespace
}  // namespace bondkit
