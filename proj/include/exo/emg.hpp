#pragma once

// Surface EMG pipeline: Butterworth band-pass design, zero-phase filtering and
// the per-muscle activation reduction between an unassisted and an assisted window.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace exo::emg {

/// Multi-channel recording with a uniform sample rate. Requires
/// sample_rate > 800 Hz, at least one channel, equal channel lengths and
/// unique labels.
class EmgRecording {
 public:
  EmgRecording(double sample_rate, std::vector<std::string> labels,
               std::vector<std::vector<double>> channels);

  double sample_rate() const noexcept { return sample_rate_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::vector<double>>& channels() const noexcept { return channels_; }
  std::size_t samples() const noexcept { return channels_.front().size(); }

  /// Throws UsageError for an unknown label.
  const std::vector<double>& channel(std::string_view label) const;

 private:
  double sample_rate_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> channels_;
};

/// y = b0 x + b1 x' + b2 x'' - a1 y' - a2 y'' (a0 normalized to 1).
struct SecondOrderSection {
  double b0, b1, b2;
  double a1, a2;

  std::complex<double> response(std::complex<double> z) const;
  /// Roots of z^2 + a1 z + a2.
  std::pair<std::complex<double>, std::complex<double>> poles() const;
};

struct BandpassSpec {
  int order = 4;  // overall band-pass order (2nd-order low-pass prototype)
  double low_cut = 10.0;
  double high_cut = 400.0;
  double sample_rate = 0.0;
  std::vector<SecondOrderSection> sections;

  /// Complex frequency response at `frequency` Hz.
  std::complex<double> response(double frequency) const;
  double magnitude(double frequency) const { return std::abs(response(frequency)); }
  /// True when every section's poles lie strictly inside the unit circle.
  bool stable() const;
};

/// Digital Butterworth band-pass of overall order 4: the 2nd-order analog
/// low-pass prototype is mapped to a band-pass with pre-warped edges and then
/// discretized by the bilinear transform, so both -3 dB points land exactly on
/// the requested cut-offs. Emitted as two second-order sections, unit gain at
/// the (pre-warped) geometric band centre.
/// Throws UsageError unless 0 < low_cut < high_cut < sample_rate / 2 and
/// sample_rate > 800 Hz.
BandpassSpec design_bandpass(double sample_rate, double low_cut = 10.0, double high_cut = 400.0);

/// Single causal pass (direct form II transposed) starting from the
/// step-response steady state for the first sample.
std::vector<double> sosfilt(const BandpassSpec& spec, std::span<const double> x);

/// Forward pass, then a pass over the time-reversed result. Zero phase and
/// twice the attenuation (in dB) of a single pass; output length equals input.
std::vector<double> filtfilt(const BandpassSpec& spec, std::span<const double> x);

/// filtfilt on every channel. Throws UsageError when the filter was designed
/// for a different sample rate.
EmgRecording filter_signal(const EmgRecording& recording, const BandpassSpec& spec);

double rms(std::span<const double> x);

struct ChannelReduction {
  std::string label;
  double baseline_rms;  // V
  double assisted_rms;  // V
  /// 1 - assisted / baseline; empty when the baseline RMS is zero.
  std::optional<double> reduction;
};

struct AssistanceReport {
  double trim_seconds;
  std::vector<ChannelReduction> channels;
  std::vector<std::string> warnings;
};

inline constexpr double kDefaultTrimSeconds = 0.5;

/// Filters both recordings, drops `trim_seconds` at each window edge and
/// compares per-channel RMS. Channels are matched by label in baseline order.
/// Throws UsageError on mismatched labels or sample rates, and when a window
/// is too short for the trim.
AssistanceReport assistance_reduction(const EmgRecording& baseline, const EmgRecording& assisted,
                                      const BandpassSpec& spec,
                                      double trim_seconds = kDefaultTrimSeconds);

/// CSV with header `t_s,<muscle1>,...`. The sample rate is derived from the
/// time column; every interval must match the mean interval within 1 ppm.
/// Throws ParseError / ValidationError.
EmgRecording parse_emg_csv(std::string_view text);

std::string serialize_emg_csv(const EmgRecording& recording);

}  // namespace exo::emg
