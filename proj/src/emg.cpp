#include "exo/emg.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "exo/errors.hpp"
#include "exo/units.hpp"
#include "text_util.hpp"

namespace exo::emg {

namespace {

using cplx = std::complex<double>;
using units::kPi;

constexpr double kMinSampleRate = 800.0;
constexpr double kJitterTolerance = 1e-6;

// Steady-state DF2T delay values for a constant input `u`, section by section.
std::vector<std::pair<double, double>> steady_state(const BandpassSpec& spec, double u) {
  std::vector<std::pair<double, double>> state;
  state.reserve(spec.sections.size());
  for (const SecondOrderSection& s : spec.sections) {
    const double y = u * (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    const double z2 = s.b2 * u - s.a2 * y;
    const double z1 = s.b1 * u - s.a1 * y + z2;
    state.emplace_back(z1, z2);
    u = y;
  }
  return state;
}

}  // namespace

EmgRecording::EmgRecording(double sample_rate, std::vector<std::string> labels,
                           std::vector<std::vector<double>> channels)
    : sample_rate_(sample_rate), labels_(std::move(labels)), channels_(std::move(channels)) {
  if (!(sample_rate_ > kMinSampleRate) || !std::isfinite(sample_rate_)) {
    throw ValidationError("sample rate must exceed 800 Hz for a 400 Hz band edge");
  }
  if (labels_.empty() || labels_.size() != channels_.size()) {
    throw ValidationError("recording needs one label per channel and at least one channel");
  }
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size()) {
    throw ValidationError("channel labels must be unique");
  }
  for (const auto& ch : channels_) {
    if (ch.size() != channels_.front().size()) {
      throw ValidationError("all channels must have the same length");
    }
  }
}

const std::vector<double>& EmgRecording::channel(std::string_view label) const {
  for (std::size_t k = 0; k < labels_.size(); ++k) {
    if (labels_[k] == label) return channels_[k];
  }
  throw UsageError("no channel labelled '" + std::string(label) + "'");
}

cplx SecondOrderSection::response(cplx z) const {
  const cplx zi = 1.0 / z;
  return (b0 + zi * (b1 + zi * b2)) / (1.0 + zi * (a1 + zi * a2));
}

std::pair<cplx, cplx> SecondOrderSection::poles() const {
  const cplx disc = std::sqrt(cplx(a1 * a1 - 4.0 * a2, 0.0));
  return {(-a1 + disc) / 2.0, (-a1 - disc) / 2.0};
}

cplx BandpassSpec::response(double frequency) const {
  const cplx z = std::polar(1.0, 2.0 * kPi * frequency / sample_rate);
  cplx h = 1.0;
  for (const SecondOrderSection& s : sections) h *= s.response(z);
  return h;
}

bool BandpassSpec::stable() const {
  return std::all_of(sections.begin(), sections.end(), [](const SecondOrderSection& s) {
    const auto [p, q] = s.poles();
    return std::abs(p) < 1.0 && std::abs(q) < 1.0;
  });
}

BandpassSpec design_bandpass(double sample_rate, double low_cut, double high_cut) {
  if (!(sample_rate > kMinSampleRate) || !std::isfinite(sample_rate)) {
    throw UsageError("sample rate must exceed 800 Hz");
  }
  if (!(low_cut > 0.0) || !(low_cut < high_cut) || !(high_cut < sample_rate / 2.0)) {
    throw UsageError("band edges must satisfy 0 < low < high < sample_rate / 2");
  }

  // Pre-warped analog edges.
  const double fs2 = 2.0 * sample_rate;
  const double w_low = fs2 * std::tan(kPi * low_cut / sample_rate);
  const double w_high = fs2 * std::tan(kPi * high_cut / sample_rate);
  const double bandwidth = w_high - w_low;
  const double centre2 = w_low * w_high;

  // Upper-half-plane pole of the 2nd-order Butterworth low-pass prototype;
  // its conjugate supplies the other half of each section.
  const cplx proto = std::polar(1.0, 3.0 * kPi / 4.0);
  const cplx half = proto * bandwidth / 2.0;
  const cplx root = std::sqrt(half * half - centre2);
  const cplx analog[2] = {half + root, half - root};

  BandpassSpec spec;
  spec.low_cut = low_cut;
  spec.high_cut = high_cut;
  spec.sample_rate = sample_rate;
  for (const cplx& s : analog) {
    const cplx z = (1.0 + s / fs2) / (1.0 - s / fs2);
    // Zeros at z = +1 (from s = 0) and z = -1 (from s = infinity).
    spec.sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
  }

  // Unit gain at the digital image of the analog centre frequency.
  const double centre_hz = sample_rate / kPi * std::atan(std::sqrt(centre2) / fs2);
  const double gain = 1.0 / spec.magnitude(centre_hz);
  spec.sections.front().b0 *= gain;
  spec.sections.front().b1 *= gain;
  spec.sections.front().b2 *= gain;
  return spec;
}

std::vector<double> sosfilt(const BandpassSpec& spec, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  if (y.empty()) return y;
  auto state = steady_state(spec, x.front());
  for (std::size_t k = 0; k < spec.sections.size(); ++k) {
    const SecondOrderSection& s = spec.sections[k];
    auto [z1, z2] = state[k];
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

std::vector<double> filtfilt(const BandpassSpec& spec, std::span<const double> x) {
  std::vector<double> forward = sosfilt(spec, x);
  std::reverse(forward.begin(), forward.end());
  std::vector<double> backward = sosfilt(spec, forward);
  std::reverse(backward.begin(), backward.end());
  return backward;
}

EmgRecording filter_signal(const EmgRecording& recording, const BandpassSpec& spec) {
  if (std::fabs(recording.sample_rate() - spec.sample_rate) >
      kJitterTolerance * recording.sample_rate()) {
    throw UsageError("filter designed for " + detail::format_sig(spec.sample_rate) +
                     " Hz applied to a " + detail::format_sig(recording.sample_rate()) +
                     " Hz recording");
  }
  std::vector<std::vector<double>> out;
  out.reserve(recording.channels().size());
  for (const auto& ch : recording.channels()) out.push_back(filtfilt(spec, ch));
  return EmgRecording(recording.sample_rate(), recording.labels(), std::move(out));
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return std::sqrt(sum / static_cast<double>(x.size()));
}

AssistanceReport assistance_reduction(const EmgRecording& baseline, const EmgRecording& assisted,
                                      const BandpassSpec& spec, double trim_seconds) {
  if (!(trim_seconds >= 0.0) || !std::isfinite(trim_seconds)) {
    throw UsageError("trim must be a nonnegative number of seconds");
  }
  if (std::fabs(baseline.sample_rate() - assisted.sample_rate()) >
      kJitterTolerance * baseline.sample_rate()) {
    throw UsageError("baseline and assisted recordings have different sample rates");
  }
  if (baseline.labels().size() != assisted.labels().size()) {
    throw UsageError("baseline and assisted recordings have different channels");
  }
  const auto trim = static_cast<std::size_t>(std::llround(trim_seconds * baseline.sample_rate()));
  for (const EmgRecording* rec : {&baseline, &assisted}) {
    if (rec->samples() <= 2 * trim) {
      throw UsageError("recording of " + std::to_string(rec->samples()) +
                       " samples is too short for a " + detail::format_sig(trim_seconds) +
                       " s trim at each edge");
    }
  }

  const EmgRecording base_f = filter_signal(baseline, spec);
  const EmgRecording assist_f = filter_signal(assisted, spec);

  AssistanceReport report{trim_seconds, {}, {}};
  for (const std::string& label : base_f.labels()) {
    const auto& b = base_f.channel(label);
    const auto& a = assist_f.channel(label);  // throws on a missing label
    const double b_rms = rms(std::span(b).subspan(trim, b.size() - 2 * trim));
    const double a_rms = rms(std::span(a).subspan(trim, a.size() - 2 * trim));
    ChannelReduction ch{label, b_rms, a_rms, std::nullopt};
    if (b_rms > 0.0) {
      ch.reduction = 1.0 - a_rms / b_rms;
    } else {
      report.warnings.push_back("channel '" + label + "': zero baseline RMS, reduction undefined");
    }
    report.channels.push_back(std::move(ch));
  }
  return report;
}

EmgRecording parse_emg_csv(std::string_view text) {
  const auto rows = detail::lines(text);
  if (rows.empty()) throw ParseError(1, "missing header");
  const auto header = detail::split(rows.front());
  if (header.size() < 2 || detail::trim(header.front()) != "t_s") {
    throw ParseError(1, "expected header t_s,<muscle1>,...");
  }
  std::vector<std::string> labels;
  for (std::size_t k = 1; k < header.size(); ++k) {
    const auto label = detail::trim(header[k]);
    if (label.empty()) throw ParseError(1, "empty channel label");
    labels.emplace_back(label);
  }

  std::vector<double> times;
  std::vector<std::vector<double>> channels(labels.size());
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const std::size_t line_no = k + 1;
    const auto fields = detail::split(rows[k]);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields");
    }
    times.push_back(detail::parse_double(fields[0], line_no, "t_s"));
    for (std::size_t c = 0; c < labels.size(); ++c) {
      channels[c].push_back(detail::parse_double(fields[c + 1], line_no, labels[c]));
    }
  }
  if (times.size() < 2) throw ValidationError("need at least two samples to derive the sample rate");

  const double interval = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(interval > 0.0)) throw ValidationError("time column must be increasing");
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double dt = times[k] - times[k - 1];
    if (std::fabs(dt - interval) > kJitterTolerance * interval) {
      throw ValidationError("line " + std::to_string(k + 2) +
                            ": non-uniform sampling (interval deviates by more than 1 ppm)");
    }
  }
  return EmgRecording(1.0 / interval, std::move(labels), std::move(channels));
}

std::string serialize_emg_csv(const EmgRecording& recording) {
  std::string out = "t_s";
  for (const auto& label : recording.labels()) out += "," + label;
  out += '\n';
  for (std::size_t i = 0; i < recording.samples(); ++i) {
    out += detail::format_sig(static_cast<double>(i) / recording.sample_rate(), 17);
    for (const auto& ch : recording.channels()) out += "," + detail::format_sig(ch[i], 9);
    out += '\n';
  }
  return out;
}

}  // namespace exo::emg
