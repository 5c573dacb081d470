#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ecfr/canonical.hpp"
#include "ecfr/cards.hpp"

namespace ecfr {

class Game;
class StrengthLibrary;

/// Shape of the per-round regression net. The input is an image-like
/// [suits, ranks, s] binary tensor; each conv kernel spans one full channel
/// and maps it to a single value, K kernels per channel. A softmax over the
/// m-length hidden layer yields the embedding coordinates; a final linear
/// map regresses the s x 3 strength rows.
struct NetConfig {
  int suits = 0;
  int ranks = 0;
  int s = 0;  // rounds encoded (tensor depth)
  int kernels = 0;  // K, per channel
  int m = 0;

  int input_size() const { return suits * ranks * s; }
  int channel_size() const { return ranks * s; }
  int width() const { return suits * kernels; }
  int output_size() const { return s * 3; }
};

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 200;
  int batch_size = 256;
  std::uint64_t seed = 1;
  int m = 4;
  int intermediate_width = 500;  // K * suits

  void validate() const;
};

template <typename Real>
struct NetParams {
  NetConfig cfg;
  std::vector<Real> conv;  // [K][ranks*s]
  std::vector<Real> w1;    // [m][K*suits]
  std::vector<Real> b1;    // [m]
  std::vector<Real> w2;    // [s*3][m]
  std::vector<Real> b2;    // [s*3]

  std::size_t parameter_count() const {
    return conv.size() + w1.size() + b1.size() + w2.size() + b2.size();
  }
  static NetParams zeros(const NetConfig& cfg);
  static NetParams random(const NetConfig& cfg, std::uint64_t seed);
};

// Binary [suits][ranks][s] encoding of a canonical view: slice j marks the
// cards revealed in segment j. Isomorphic hands share one tensor because the
// input is already canonical.
template <typename Real>
std::vector<Real> encode(const CanonicalHand& hand, const NetConfig& cfg);

template <typename Real>
struct ForwardResult {
  std::vector<Real> coords;      // m, softmax output
  std::vector<Real> prediction;  // s*3
};

template <typename Real>
ForwardResult<Real> forward(const NetParams<Real>& params, std::span<const Real> x);

// Mean squared error over the batch (mean over samples and output entries)
// plus the full analytic gradient. X is [batch][input], Y is [batch][s*3].
template <typename Real>
Real loss_and_grad(const NetParams<Real>& params, std::span<const Real> X, std::span<const Real> Y,
                   int batch, NetParams<Real>* grad);

template <typename Real>
void sgd_step(NetParams<Real>& params, const NetParams<Real>& grad, Real lr);

struct TrainReport {
  std::vector<double> epoch_mse;
  double final_mse = 0.0;
};

// Trains one round's net on the exhaustive canonical dataset (one sample per
// class; the same inputs are used at inference, so there is no held-out
// split). Deterministic under cfg.seed.
NetParams<float> train_round(const Game& game, const StrengthLibrary& strength, int round,
                             const TrainConfig& cfg, TrainReport* report = nullptr);

// Embedding coordinates for every class of `round`, renormalized to sum to
// exactly 1 in double precision. Row-major [num_classes][m].
std::vector<double> build_coordinates(const NetParams<float>& params, const Game& game, int round);

void save_net(const std::string& path, const NetParams<float>& params);
NetParams<float> load_net(const std::string& path);

void export_coordinates_csv(std::ostream& os, const std::vector<double>& coords, int m);

}  // namespace ecfr
