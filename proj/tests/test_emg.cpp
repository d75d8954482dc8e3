#include <doctest.h>

#include <cmath>
#include <numeric>

#include "exo/emg.hpp"
#include "exo/errors.hpp"
#include "oracles.hpp"

using namespace exo;
using namespace exo::emg;

namespace {

constexpr double kPi = oracle::kPi;

std::vector<double> sine(double freq, double fs, std::size_t n, double amp = 1.0, double offset = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = offset + amp * std::sin(2 * kPi * freq * i / fs);
  return x;
}

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  oracle::Rng rng(seed);
  std::vector<double> x(n);
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

double max_abs(const std::vector<double>& x, std::size_t from, std::size_t to) {
  double m = 0.0;
  for (std::size_t i = from; i < to; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

}  // namespace

TEST_CASE("band-pass matches an independent Butterworth design") {
  // |H(f)| of scipy.signal.butter(2, [10, 400], 'band', fs=..., output='sos').
  const double freqs[] = {1, 2, 5, 10, 20, 63.2455532, 100, 200, 400, 600, 900};
  const double ref2000[] = {0.0095743781267316787, 0.038321026579798981, 0.2351040400201381,
                            0.70710678118660919,   0.97708906474219337,  0.99999990518096871,
                            0.99989127477431305,   0.98646795682824118,  0.70710678118654757,
                            0.26063378136660525,   0.01268160797765247};
  const double ref4000[] = {0.0095261767529240728, 0.038134064711667817, 0.2342514777390684,
                            0.70710678118636716,   0.97782127910063121,  0.9999999996598411,
                            0.99977319859275982,   0.98032631982547058,  0.70710678118654713,
                            0.36734135567949328,   0.13746798827589446};
  const BandpassSpec s2000 = design_bandpass(2000);
  const BandpassSpec s4000 = design_bandpass(4000);
  for (std::size_t k = 0; k < std::size(freqs); ++k) {
    CHECK(s2000.magnitude(freqs[k]) == doctest::Approx(ref2000[k]).epsilon(1e-9));
    CHECK(s4000.magnitude(freqs[k]) == doctest::Approx(ref4000[k]).epsilon(1e-9));
  }
  CHECK(s2000.order == 4);
  CHECK(s2000.sections.size() == 2);
}

TEST_CASE("band-pass corner frequencies and pass band") {
  const BandpassSpec spec = design_bandpass(2000);
  CHECK(spec.magnitude(63.0) >= 0.99);
  CHECK(spec.magnitude(10.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.01));
  CHECK(spec.magnitude(400.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.01));
  CHECK(spec.magnitude(0.0) < 1e-12);
  CHECK(spec.magnitude(1000.0) < 1e-12);
}

TEST_CASE("band-pass design errors") {
  CHECK_THROWS_AS(design_bandpass(800), UsageError);
  CHECK_THROWS_AS(design_bandpass(500), UsageError);
  CHECK_THROWS_AS(design_bandpass(2000, 10, 1000), UsageError);
  CHECK_THROWS_AS(design_bandpass(2000, 400, 10), UsageError);
}

TEST_CASE("filter stability across sample rates") {
  for (double fs : {1000.0, 1111.0, 2000.0, 4000.0}) {
    const BandpassSpec spec = design_bandpass(fs);
    CHECK(spec.stable());
    for (const auto& s : spec.sections) {
      const auto [p, q] = s.poles();
      CHECK(std::abs(p) < 1.0);
      CHECK(std::abs(q) < 1.0);
    }
  }
}

TEST_CASE("2 Hz sinusoid is attenuated by at least 20 dB") {
  const double fs = 2000;
  const BandpassSpec spec = design_bandpass(fs);
  const auto x = sine(2.0, fs, 20000);
  const auto single = sosfilt(spec, x);
  const std::size_t trim = 4000;
  const double in = rms(std::span(x).subspan(trim, x.size() - 2 * trim));
  CHECK(rms(std::span(single).subspan(trim, x.size() - 2 * trim)) / in <= 0.1);
  const auto zero_phase = filtfilt(spec, x);
  CHECK(rms(std::span(zero_phase).subspan(trim, x.size() - 2 * trim)) / in <= 0.01);
}

TEST_CASE("filtfilt basics") {
  const double fs = 2000;
  const BandpassSpec spec = design_bandpass(fs);

  const auto zeros = filtfilt(spec, std::vector<double>(500, 0.0));
  CHECK(zeros.size() == 500);
  for (double v : zeros) CHECK(v == 0.0);

  const auto tone = sine(100.0, fs, 8000);
  const auto out = filtfilt(spec, tone);
  REQUIRE(out.size() == tone.size());
  // Round trip gain |H(100 Hz)|^2.
  CHECK(max_abs(out, 1000, 7000) == doctest::Approx(1.0).epsilon(0.02));

  const auto dc = filtfilt(spec, std::vector<double>(6000, 3.5));
  const double mean = std::accumulate(dc.begin() + 1000, dc.end() - 1000, 0.0) / 4000.0;
  CHECK(std::fabs(mean) < 1e-9);

  const auto shifted = filtfilt(spec, sine(100.0, fs, 8000, 1.0, 2.0));
  CHECK(max_abs(shifted, 1000, 7000) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("property: filtering is linear") {
  const BandpassSpec spec = design_bandpass(2000);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = noise(3000, seed);
    const auto y = noise(3000, seed + 100);
    const double a = 0.37 * static_cast<double>(seed);
    std::vector<double> ax(x.size()), xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      ax[i] = a * x[i];
      xy[i] = x[i] + y[i];
    }
    const auto fx = filtfilt(spec, x), fy = filtfilt(spec, y), fax = filtfilt(spec, ax), fxy = filtfilt(spec, xy);
    const double scale = max_abs(fx, 0, fx.size()) + max_abs(fy, 0, fy.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(std::fabs(fax[i] - a * fx[i]) <= 1e-12 * a * scale);
      CHECK(std::fabs(fxy[i] - (fx[i] + fy[i])) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("zero phase: cross-correlation peaks at lag 0") {
  const double fs = 2000;
  const BandpassSpec spec = design_bandpass(fs);
  for (double freq : {37.0, 80.0, 150.0}) {
    const auto x = sine(freq, fs, 8000);
    const auto y = filtfilt(spec, x);
    int best_lag = 99;
    double best = -HUGE_VAL;
    for (int lag = -5; lag <= 5; ++lag) {
      double acc = 0.0;
      for (std::size_t i = 1000; i < 7000; ++i) acc += x[i] * y[i + lag];
      if (acc > best) {
        best = acc;
        best_lag = lag;
      }
    }
    CHECK(best_lag == 0);
  }
}

TEST_CASE("recording validation") {
  CHECK_THROWS_AS(EmgRecording(800, {"rf"}, {{0.0}}), ValidationError);
  CHECK_THROWS_AS(EmgRecording(2000, {"rf", "vl"}, {{0.0, 1.0}, {0.0}}), ValidationError);
  CHECK_THROWS_AS(EmgRecording(2000, {"rf", "rf"}, {{0.0}, {0.0}}), ValidationError);
  CHECK_THROWS_AS(EmgRecording(2000, {}, {}), ValidationError);
  const EmgRecording rec(2000, {"rf"}, {{1.0, 2.0}});
  CHECK_THROWS_AS(rec.channel("vm"), UsageError);
  CHECK_THROWS_AS(filter_signal(rec, design_bandpass(4000)), UsageError);
}

TEST_CASE("assistance reduction") {
  const double fs = 2000;
  const BandpassSpec spec = design_bandpass(fs);
  const std::size_t n = 20000;
  const auto rf = noise(n, 11), vl = noise(n, 12), vm = noise(n, 13);
  const EmgRecording base(fs, {"rectus_femoris", "vastus_lateralis", "vastus_medialis"}, {rf, vl, vm});

  auto scaled = [&](double g) {
    std::vector<std::vector<double>> ch;
    for (const auto& c : base.channels()) {
      std::vector<double> v(c);
      for (double& s : v) s *= g;
      ch.push_back(std::move(v));
    }
    return EmgRecording(fs, base.labels(), std::move(ch));
  };

  const auto same = assistance_reduction(base, base, spec);
  for (const auto& c : same.channels) CHECK(*c.reduction == 0.0);

  const auto reduced = assistance_reduction(base, scaled(0.204), spec);
  for (const auto& c : reduced.channels) CHECK(*c.reduction == doctest::Approx(0.796).epsilon(1e-9));

  const auto rose = assistance_reduction(base, scaled(1.001), spec);
  for (const auto& c : rose.channels) CHECK(*c.reduction == doctest::Approx(-0.001).epsilon(1e-6));

  // Same gain on both windows leaves the reduction unchanged.
  const auto g1 = assistance_reduction(scaled(3.0), scaled(3.0 * 0.5), spec);
  const auto g0 = assistance_reduction(base, scaled(0.5), spec);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(*g1.channels[k].reduction == doctest::Approx(*g0.channels[k].reduction).epsilon(1e-12));
  }
}

TEST_CASE("assistance reduction edge cases") {
  const double fs = 2000;
  const BandpassSpec spec = design_bandpass(fs);
  const EmgRecording silent(fs, {"rf"}, {std::vector<double>(4000, 0.0)});
  const EmgRecording active(fs, {"rf"}, {noise(4000, 3)});
  const auto flagged = assistance_reduction(silent, active, spec);
  CHECK_FALSE(flagged.channels[0].reduction);
  CHECK(flagged.warnings.size() == 1);

  const EmgRecording other(fs, {"vm"}, {noise(4000, 3)});
  CHECK_THROWS_AS(assistance_reduction(active, other, spec), UsageError);
  const EmgRecording short_rec(fs, {"rf"}, {noise(1500, 3)});
  CHECK_THROWS_AS(assistance_reduction(short_rec, active, spec), UsageError);
  const EmgRecording other_rate(4000, {"rf"}, {noise(8000, 3)});
  CHECK_THROWS_AS(assistance_reduction(active, other_rate, spec), UsageError);
}

TEST_CASE("EMG CSV round trip and validation") {
  const EmgRecording rec(2000, {"rf", "vl"}, {noise(100, 1), noise(100, 2)});
  const EmgRecording back = parse_emg_csv(serialize_emg_csv(rec));
  CHECK(back.sample_rate() == doctest::Approx(2000.0).epsilon(1e-9));
  CHECK(back.labels() == rec.labels());
  for (std::size_t i = 0; i < 100; ++i) CHECK(back.channel("vl")[i] == doctest::Approx(rec.channel("vl")[i]).epsilon(1e-8));

  CHECK_THROWS_AS(parse_emg_csv("time,rf\n0,1\n0.0005,2\n"), ParseError);
  CHECK_THROWS_AS(parse_emg_csv("t_s\n0\n0.0005\n"), ParseError);
  CHECK_THROWS_AS(parse_emg_csv("t_s,rf\n0,1\n"), ValidationError);
  CHECK_THROWS_AS(parse_emg_csv("t_s,rf\n0,1\n0.0005,2\n0.0011,3\n0.0015,1\n"), ValidationError);
  CHECK_THROWS_AS(parse_emg_csv("t_s,rf\n0,1\n0.0005,x\n"), ParseError);
  // 500 Hz is below the 800 Hz floor.
  CHECK_THROWS_AS(parse_emg_csv("t_s,rf\n0,1\n0.002,2\n0.004,3\n"), ValidationError);
}
