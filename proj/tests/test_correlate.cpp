#include <catch2/catch.hpp>

#include <complex>
#include <memory>
#include <random>

#include "digeo/correlate.hpp"

using namespace digeo;

namespace {

// Independent oracle for the position-domain correlation: naive direct sum
// in extended precision with a per-term exp(), no phasor recurrence.
long double correlation_oracle(const BasebandCapture& y1, const BasebandCapture& y2,
                               const PairOffsets& off) {
    using lcplx = std::complex<long double>;
    const auto n = static_cast<std::int64_t>(y1.samples.size());
    lcplx acc{0.0L, 0.0L};
    for (std::int64_t k = 0; k < n; ++k) {
        const std::int64_t shifted = k + off.tdoa_samples;
        if (shifted < 0 || shifted >= n) continue;
        const long double t_k =
            static_cast<long double>(k) / static_cast<long double>(y1.sample_rate_hz);
        const lcplx a{y1.samples[static_cast<std::size_t>(k)].real(),
                      y1.samples[static_cast<std::size_t>(k)].imag()};
        const lcplx b{y2.samples[static_cast<std::size_t>(shifted)].real(),
                      y2.samples[static_cast<std::size_t>(shifted)].imag()};
        const long double phase =
            2.0L * 3.141592653589793238462643383279502884L *
            static_cast<long double>(off.fdoa_hz) * t_k;
        acc += a * std::conj(b) * lcplx{std::cos(phase), std::sin(phase)};
    }
    return std::abs(acc);
}

BasebandCapture random_capture(std::size_t n, double fs, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    BasebandCapture cap;
    cap.sample_rate_hz = fs;
    cap.center_freq_hz = 1575.42e6;
    cap.samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) cap.samples.emplace_back(gauss(engine), gauss(engine));
    return cap;
}

BasebandCapture all_ones(std::size_t n, double fs) {
    BasebandCapture cap;
    cap.sample_rate_hz = fs;
    cap.samples.assign(n, cplx{1.0, 0.0});
    return cap;
}

std::shared_ptr<const CandidateGrid> small_grid() {
    return std::make_shared<const CandidateGrid>(
        build_candidate_grid({0.0, 0.2, 0.0, 0.2}, 0.1));
}

}  // namespace

TEST_CASE("all-ones captures at zero offsets sum coherently to N") {
    const std::size_t n = 1000;
    const auto ones = all_ones(n, 1e6);
    CHECK(correlate_point(ones, ones, {0, 0.0}) == Approx(static_cast<double>(n)).epsilon(1e-12));
}

TEST_CASE("full-period complex exponential is orthogonal to a constant") {
    const std::size_t n = 4096;
    const double fs = 1e6;
    const auto ones = all_ones(n, fs);
    for (const int m : {1, 2, 5, -3}) {
        const double fdoa = static_cast<double>(m) * fs / static_cast<double>(n);
        CHECK(correlate_point(ones, ones, {0, fdoa}) < static_cast<double>(n) * 1e-10);
    }
}

TEST_CASE("kernel matches the extended-precision oracle on random instances") {
    std::mt19937_64 engine(4242);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1000 + engine() % 9001;
        const double fs = 5e6;
        const auto y1 = random_capture(n, fs, engine());
        const auto y2 = random_capture(n, fs, engine());
        const PairOffsets off{
            static_cast<std::int64_t>(engine() % (2 * n)) - static_cast<std::int64_t>(n),
            (static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5) * fs / 2.0};
        const double got = correlate_point(y1, y2, off);
        const auto want = static_cast<double>(correlation_oracle(y1, y2, off));
        if (want > 0.0) CHECK(std::abs(got - want) / want < 1e-6);
    }
}

TEST_CASE("out-of-range shifted indices contribute zero") {
    const auto ones = all_ones(100, 1e6);
    SECTION("shift beyond the record is an empty sum") {
        CHECK(correlate_point(ones, ones, {100, 0.0}) == 0.0);
        CHECK(correlate_point(ones, ones, {-250, 0.0}) == 0.0);
    }
    SECTION("partial overlap counts only the overlapping span") {
        CHECK(correlate_point(ones, ones, {40, 0.0}) == Approx(60.0));
        CHECK(correlate_point(ones, ones, {-30, 0.0}) == Approx(70.0));
    }
}

TEST_CASE("mismatched captures are rejected") {
    const auto a = all_ones(100, 1e6);
    auto b = all_ones(100, 2e6);
    CHECK_THROWS_AS(correlate_point(a, b, {0, 0.0}), std::invalid_argument);
    auto c = all_ones(101, 1e6);
    CHECK_THROWS_AS(correlate_point(a, c, {0, 0.0}), std::invalid_argument);
}

TEST_CASE("common unit phasor leaves S unchanged; positive scaling is homogeneous") {
    auto y1 = random_capture(2048, 1e6, 5);
    auto y2 = random_capture(2048, 1e6, 6);
    const PairOffsets off{17, 1234.5};
    const double base = correlate_point(y1, y2, off);

    const cplx unit = std::polar(1.0, 0.7321);
    BasebandCapture y1r = y1, y2r = y2;
    for (auto& s : y1r.samples) s *= unit;
    for (auto& s : y2r.samples) s *= unit;
    CHECK(correlate_point(y1r, y2r, off) == Approx(base).epsilon(1e-12));

    BasebandCapture y1s = y1;
    for (auto& s : y1s.samples) s *= 3.5;
    CHECK(correlate_point(y1s, y2, off) == Approx(3.5 * base).epsilon(1e-12));
}

TEST_CASE("grid accumulation") {
    const auto grid = small_grid();
    CorrelationGrid a{grid, std::vector<double>(grid->size(), 1.0)};
    CorrelationGrid b{grid, std::vector<double>(grid->size(), 2.5)};

    SECTION("single grid is the identity") {
        const auto out = accumulate_grids(std::vector<CorrelationGrid>{a});
        CHECK(out.values == a.values);
    }
    SECTION("K copies scale by K") {
        const std::vector<CorrelationGrid> grids(4, a);
        const auto out = accumulate_grids(grids);
        for (const double v : out.values) CHECK(v == Approx(4.0));
    }
    SECTION("order does not matter beyond roundoff") {
        std::vector<CorrelationGrid> fwd{a, b}, rev{b, a};
        const auto x = accumulate_grids(fwd);
        const auto y = accumulate_grids(rev);
        for (std::size_t i = 0; i < x.values.size(); ++i)
            CHECK(x.values[i] == Approx(y.values[i]).epsilon(1e-10));
    }
    SECTION("mixed lattices are rejected") {
        const auto other = std::make_shared<const CandidateGrid>(
            build_candidate_grid({0.0, 0.2, 0.0, 0.2}, 0.2));
        CorrelationGrid c{other, std::vector<double>(other->size(), 0.0)};
        std::vector<CorrelationGrid> grids{a, c};
        CHECK_THROWS_AS(accumulate_grids(grids), std::invalid_argument);
    }
}

TEST_CASE("detection thresholding") {
    const auto grid = std::make_shared<const CandidateGrid>(
        build_candidate_grid({0.0, 1.0, 0.0, 1.0}, 0.1));  // 11x11

    SECTION("constant grid yields no detections") {
        CorrelationGrid flat{grid, std::vector<double>(grid->size(), 3.0)};
        CHECK(detect_emitters(flat).empty());
    }
    SECTION("single injected delta is found at its cell") {
        std::mt19937_64 engine(77);
        std::vector<double> values(grid->size());
        for (double& v : values) v = 1.0 + 0.01 * (static_cast<double>(engine() >> 11) * 0x1.0p-53);
        const std::size_t target = grid->index(7, 4);
        values[target] = 2.0;
        const auto detections = detect_emitters({grid, values}, 5.0, 2);
        REQUIRE(detections.size() == 1);
        CHECK(detections[0].grid_index == target);
        CHECK(detections[0].score == Approx(2.0));
        CHECK(detections[0].score_zsigma > 5.0);
        CHECK(detections[0].location.lat_deg == Approx(0.7));
        CHECK(detections[0].location.lon_deg == Approx(0.4));
    }
    SECTION("exclusion radius suppresses shoulders of one peak") {
        std::vector<double> values(grid->size(), 0.0);
        values[grid->index(5, 5)] = 10.0;
        values[grid->index(5, 7)] = 9.0;   // within radius 5 of the peak
        values[grid->index(5, 6)] = 8.0;
        const auto detections = detect_emitters({grid, values}, 1.0, 5);
        REQUIRE(detections.size() == 1);
        CHECK(detections[0].grid_index == grid->index(5, 5));
    }
}
