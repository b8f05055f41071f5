#include <catch2/catch.hpp>

#include <random>

#include "digeo/backend.hpp"

using namespace digeo;

namespace {

BasebandCapture random_capture(std::size_t n, double fs, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    BasebandCapture cap;
    cap.sample_rate_hz = fs;
    cap.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) cap.samples.emplace_back(gauss(engine), gauss(engine));
    return cap;
}

std::vector<PairOffsets> random_offsets(std::size_t count, std::size_t n_samples, double fs,
                                        std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::vector<PairOffsets> offsets;
    offsets.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto span = static_cast<std::int64_t>(n_samples);
        offsets.push_back({static_cast<std::int64_t>(engine() % (2 * n_samples)) - span,
                           (static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5) * fs / 2.0});
    }
    return offsets;
}

}  // namespace

TEST_CASE("batch plan arithmetic") {
    const BatchPlan plan = plan_batches(1'000'000, 8);
    CHECK(plan.batch_count() == 125'000);

    CHECK(plan_batches(100, 1000).batch_count() == 1);
    CHECK(plan_batches(1, 1).batch_count() == 1);
}

TEST_CASE("batch ranges partition the candidate set") {
    for (const std::size_t batch_size : {1ul, 3ul, 8ul, 100ul, 1001ul}) {
        const std::size_t n = 1001;
        const BatchPlan plan = plan_batches(n, batch_size);
        std::size_t expect_begin = 0;
        for (std::size_t b = 0; b < plan.batch_count(); ++b) {
            const auto [begin, end] = plan.batch_range(b);
            CHECK(begin == expect_begin);
            CHECK(end > begin);
            CHECK(end - begin <= batch_size);
            expect_begin = end;
        }
        CHECK(expect_begin == n);
    }
}

TEST_CASE("batch plan enforces the memory budget and names the limiting term") {
    CHECK_THROWS_WITH(plan_batches(1000, 1ull << 40, 1 << 20, 0),
                      Catch::Contains("batch working set"));
    CHECK_THROWS_WITH(plan_batches(1000, 8, 1 << 10, 1 << 20), Catch::Contains("captures"));
    CHECK_THROWS_AS(plan_batches(0, 8), std::invalid_argument);
    CHECK_THROWS_AS(plan_batches(10, 0), std::invalid_argument);
}

TEST_CASE("serial backend batch of one equals correlate_point") {
    const auto y1 = random_capture(2048, 5e6, 1);
    const auto y2 = random_capture(2048, 5e6, 2);
    const SerialBackend backend;
    for (const auto& off : random_offsets(32, 2048, 5e6, 3)) {
        const std::vector<PairOffsets> batch{off};
        const auto out = correlate_batch(backend, batch, y1, y2);
        REQUIRE(out.size() == 1);
        CHECK(out[0] == correlate_point(y1, y2, off));  // exact: same kernel, same order
    }
}

TEST_CASE("serial and parallel backends agree within 1e-4 relative") {
    const std::size_t n_points = 10'000;
    const auto y1 = random_capture(2000, 5e6, 11);
    const auto y2 = random_capture(2000, 5e6, 12);
    const auto offsets = random_offsets(n_points, 2000, 5e6, 13);

    const SerialBackend serial;
    const ParallelBatchedBackend parallel(2);
    const auto a = correlate_batch(serial, offsets, y1, y2);
    const auto b = correlate_batch(parallel, offsets, y1, y2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        CHECK(std::abs(a[i] - b[i]) / denom <= 1e-4);
    }
}

TEST_CASE("repeated invocations are bit-identical per backend") {
    const auto y1 = random_capture(1500, 5e6, 21);
    const auto y2 = random_capture(1500, 5e6, 22);
    const auto offsets = random_offsets(4000, 1500, 5e6, 23);

    for (const std::string name : {"serial", "parallel"}) {
        const auto backend = make_backend(name, 2);
        const auto a = correlate_batch(*backend, offsets, y1, y2);
        const auto b = correlate_batch(*backend, offsets, y1, y2);
        CHECK(a == b);
    }
}

TEST_CASE("partition invariance: any batch size concatenates to the unbatched result") {
    const auto y1 = random_capture(1024, 5e6, 31);
    const auto y2 = random_capture(1024, 5e6, 32);
    const auto offsets = random_offsets(257, 1024, 5e6, 33);

    const SerialBackend serial;
    const auto reference = correlate_batch(serial, offsets, y1, y2);

    for (const std::size_t batch_size : {1ul, 2ul, 7ul, 8ul, 64ul, 257ul, 1000ul}) {
        const auto backend = make_backend("parallel", 2);
        const auto session = backend->stage(y1, y2);
        const BatchPlan plan = plan_batches(offsets.size(), batch_size);
        std::vector<double> out(offsets.size());
        for (std::size_t b = 0; b < plan.batch_count(); ++b) {
            const auto [begin, end] = plan.batch_range(b);
            session->correlate_batch(std::span<const PairOffsets>(offsets).subspan(begin, end - begin),
                                     std::span<double>(out).subspan(begin, end - begin));
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double denom = std::max({std::abs(out[i]), std::abs(reference[i]), 1e-300});
            CHECK(std::abs(out[i] - reference[i]) / denom <= 1e-4);
        }
    }
}

TEST_CASE("parallel results do not depend on the worker count") {
    const auto y1 = random_capture(800, 5e6, 41);
    const auto y2 = random_capture(800, 5e6, 42);
    const auto offsets = random_offsets(1000, 800, 5e6, 43);

    const ParallelBatchedBackend one(1), two(2), three(3);
    const auto a = correlate_batch(one, offsets, y1, y2);
    const auto b = correlate_batch(two, offsets, y1, y2);
    const auto c = correlate_batch(three, offsets, y1, y2);
    CHECK(a == b);
    CHECK(b == c);
}

TEST_CASE("one backend serves concurrent sessions for distinct snapshots") {
    const auto y1a = random_capture(1200, 5e6, 61);
    const auto y2a = random_capture(1200, 5e6, 62);
    const auto y1b = random_capture(1200, 5e6, 63);
    const auto y2b = random_capture(1200, 5e6, 64);
    const auto offsets = random_offsets(2000, 1200, 5e6, 65);

    const SerialBackend serial;
    const auto want_a = correlate_batch(serial, offsets, y1a, y2a);
    const auto want_b = correlate_batch(serial, offsets, y1b, y2b);

    const ParallelBatchedBackend parallel(2);
    std::vector<double> got_a, got_b;
    std::thread worker_a([&] {
        const auto session = parallel.stage(y1a, y2a);
        got_a = session->correlate_batch(offsets);
    });
    std::thread worker_b([&] {
        const auto session = parallel.stage(y1b, y2b);
        got_b = session->correlate_batch(offsets);
    });
    worker_a.join();
    worker_b.join();
    CHECK(got_a == want_a);
    CHECK(got_b == want_b);
}

TEST_CASE("backend registry and descriptors") {
    const auto serial = make_backend("serial");
    CHECK(serial->descriptor().kind == "serial-reference");
    const auto parallel = make_backend("parallel", 3);
    CHECK(parallel->descriptor().kind == "parallel-batched");
    CHECK(parallel->descriptor().workers == 3);
    CHECK_THROWS_AS(make_backend("gpu"), std::invalid_argument);
}

TEST_CASE("stage rejects mismatched captures and empty batches") {
    const auto y1 = random_capture(100, 5e6, 51);
    const auto y2 = random_capture(100, 2e6, 52);
    const SerialBackend backend;
    CHECK_THROWS_AS(backend.stage(y1, y2), std::invalid_argument);

    const auto y3 = random_capture(100, 5e6, 53);
    const auto session = backend.stage(y1, y3);
    std::vector<PairOffsets> empty;
    std::vector<double> out;
    CHECK_THROWS_AS(session->correlate_batch(empty, out), std::invalid_argument);
}
