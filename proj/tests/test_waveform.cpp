#include <catch2/catch.hpp>

#include <cstring>

#include "digeo/waveform.hpp"

using namespace digeo;

TEST_CASE("all generators emit constant-modulus samples") {
    const double fs = 2.048e6;
    const double dur = 2e-3;
    const BasebandCapture caps[] = {
        generate_spoofer({7, 42}, fs, dur),
        generate_tone({1000.0}, fs, dur),
        generate_chirp({2e6, 20e-6}, fs * 4, dur),
        generate_sawtooth({200e3, 2.5e-3}, fs, dur),
    };
    for (const auto& cap : caps)
        for (const cplx& s : cap.samples) CHECK(std::abs(s) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("generators are deterministic") {
    const auto a = generate_spoofer({3, 99}, 5.115e6, 3e-3);
    const auto b = generate_spoofer({3, 99}, 5.115e6, 3e-3);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(std::memcmp(a.samples.data(), b.samples.data(), a.samples.size() * sizeof(cplx)) == 0);

    const auto c = generate_sawtooth({200e3, 2.5e-3}, 2.048e6, 5e-3);
    const auto d = generate_sawtooth({200e3, 2.5e-3}, 2.048e6, 5e-3);
    CHECK(std::memcmp(c.samples.data(), d.samples.data(), c.samples.size() * sizeof(cplx)) == 0);
}

TEST_CASE("spoofer at 5.115 MHz holds each chip for 5 samples and repeats per code period") {
    const double fs = 5.115e6;
    const auto cap = generate_spoofer({1, 7}, fs, 25e-3);
    const std::size_t code_period_samples = 5115;  // 5.115e6 / 1.023e6 * 1023

    // chips repeat every code period up to the nav-bit sign; recover the
    // per-sample nav sign by dividing out one period against the next
    for (std::size_t k = 0; k + code_period_samples < cap.samples.size(); k += 523) {
        const double ratio =
            cap.samples[k + code_period_samples].real() / cap.samples[k].real();
        CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-12);
    }

    // zero-order hold: 5 consecutive samples per chip
    for (std::size_t k = 0; k < 5115; k += 5)
        for (std::size_t i = 1; i < 5; ++i) CHECK(cap.samples[k + i] == cap.samples[k]);
}

TEST_CASE("spoofer nav-bit sign changes only at 20 ms boundaries") {
    const double fs = 1.023e6;  // one sample per chip
    const auto cap = generate_spoofer({5, 12345}, fs, 0.05);
    const ChipSequence chips = generate_ca_code(5);

    // divide out the code to recover the nav-bit stream
    const auto nav_at = [&](std::size_t k) {
        const double chip = chips[k % ca_code_length];
        return cap.samples[k].real() / chip;
    };
    const auto samples_per_bit = static_cast<std::size_t>(fs / 50.0);  // 20 ms
    for (std::size_t k = 0; k + 1 < cap.samples.size(); ++k) {
        if (nav_at(k + 1) != nav_at(k)) CHECK((k + 1) % samples_per_bit == 0);
    }
}

TEST_CASE("tone at zero offset is all ones") {
    const auto cap = generate_tone({0.0}, 1e6, 1e-3);
    for (const cplx& s : cap.samples) {
        CHECK(s.real() == Approx(1.0));
        CHECK(s.imag() == Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("tone at fs/4 cycles through the quadrature points") {
    const double fs = 1e6;
    const auto cap = generate_tone({fs / 4.0}, fs, 16e-6);
    const cplx expect[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t k = 0; k < cap.samples.size(); ++k) {
        CHECK(cap.samples[k].real() == Approx(expect[k % 4].real()).margin(1e-9));
        CHECK(cap.samples[k].imag() == Approx(expect[k % 4].imag()).margin(1e-9));
    }
}

TEST_CASE("tone beyond Nyquist is rejected") {
    CHECK_THROWS_AS(generate_tone({6e5}, 1e6, 1e-3), std::invalid_argument);
}

TEST_CASE("chirp phase anchors at period boundaries") {
    const ChirpSpec spec{2e6, 20e-6};
    const double fs = 8e6;  // period = 160 samples exactly
    const auto cap = generate_chirp(spec, fs, 100e-6);
    const auto period_samples = static_cast<std::size_t>(spec.period_s * fs);
    for (std::size_t k = 0; k < cap.samples.size(); k += period_samples) {
        CHECK(cap.samples[k].real() == Approx(1.0).margin(1e-9));
        CHECK(cap.samples[k].imag() == Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("chirp instantaneous frequency sweeps -B/2 to +B/2 linearly") {
    const ChirpSpec spec{1e6, 50e-6};
    const double fs = 8e6;
    const auto cap = generate_chirp(spec, fs, spec.period_s);
    const double ts = 1.0 / fs;

    double prev_freq = 0.0;
    for (std::size_t k = 0; k + 1 < cap.samples.size(); ++k) {
        const double freq =
            std::arg(cap.samples[k + 1] * std::conj(cap.samples[k])) / (2.0 * std::numbers::pi * ts);
        const double u = (static_cast<double>(k) + 0.5) * ts;
        const double expect = spec.bandwidth_hz / spec.period_s * u - spec.bandwidth_hz / 2.0;
        CHECK(freq == Approx(expect).margin(spec.bandwidth_hz * ts / spec.period_s + 1.0));
        if (k > 0) CHECK(freq > prev_freq - 1.0);  // monotone within the period
        prev_freq = freq;
    }
}

TEST_CASE("sawtooth second half conjugates the first and the period is 2 T_chirp") {
    const SawtoothSpec spec{200e3, 2.5e-3};
    CHECK(spec.full_period_s() == Approx(5e-3));

    const double fs = 2.048e6;
    const auto cap = generate_sawtooth(spec, fs, 10e-3);  // two full periods
    const auto half = static_cast<std::size_t>(spec.chirp_period_s * fs);
    const auto full = 2 * half;

    for (std::size_t k = 0; k < half; k += 7) {
        CHECK(cap.samples[k + half].real() == Approx(cap.samples[k].real()).margin(1e-9));
        CHECK(cap.samples[k + half].imag() == Approx(-cap.samples[k].imag()).margin(1e-9));
    }
    for (std::size_t k = 0; k < full; k += 11) {
        CHECK(cap.samples[k + full].real() == Approx(cap.samples[k].real()).margin(1e-9));
        CHECK(cap.samples[k + full].imag() == Approx(cap.samples[k].imag()).margin(1e-9));
    }
}

TEST_CASE("waveform validation") {
    CHECK_THROWS_AS(generate_spoofer({0, 0}, 2.048e6, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(generate_chirp({2e6, 20e-6}, 1e6, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(generate_chirp({0.0, 20e-6}, 8e6, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(generate_sawtooth({200e3, 0.0}, 2.048e6, 1e-3), std::invalid_argument);
}
