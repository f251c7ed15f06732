#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "eegdep/classify.hpp"
#include "eegdep/signal.hpp"

namespace eegdep {

/// mt19937_64 with portable uniform and Box-Muller Gaussian draws, so a seed
/// produces the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1), 53-bit
  double gaussian();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 mix of a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double dt = 0.01;
  std::size_t n = 50000;
  std::size_t transient = 1000;
  std::array<double, 3> initial{1.0, 1.0, 1.0};
};

/// x component of an RK4 integration, emitted after the transient; fs = 1/dt.
TimeSeries lorenz(const LorenzParams& p);

enum class NoiseKind { kWhite, kPink };

/// Unit-variance Gaussian white noise, or pink noise from 1/f power shaping
/// of white noise in the frequency domain (rescaled to unit variance).
TimeSeries noise(NoiseKind kind, std::size_t n, std::uint64_t seed, double fs = 250.0);

struct CohortSpec {
  std::size_t n_depressed = 18;
  std::size_t n_control = 25;
  double fs = 250.0;
  double duration_s = 40.0;
  std::vector<std::string> channels{"Fp1", "Fpz", "Fp2"};
  // Shift of the depressed group's latent regularity, in between-subject SD.
  double effect = 0.0;
  std::uint64_t seed = 20240611;
};

struct Recording {
  std::string subject_id;
  Label label = Label::kControl;
  double fs = 250.0;
  std::vector<TimeSeries> channels;
};

/// Each subject draws a latent regularity z ~ N(0, 1), shifted by `effect`
/// for the depressed group. Every channel is pink background noise plus a
/// resonant alpha-band rhythm whose amplitude rises and bandwidth narrows
/// with z. Subjects use independent derived seeds.
std::vector<Recording> synth_cohort(const CohortSpec& spec);

/// One subject of the cohort above; `index` is its position in the cohort.
Recording synth_subject(const CohortSpec& spec, std::size_t index);

}  // namespace eegdep
