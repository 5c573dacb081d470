#include "ecfr/embed_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ecfr/game.hpp"
#include "ecfr/kernels.hpp"
#include "ecfr/strength.hpp"

namespace ecfr {

void TrainConfig::validate() const {
  if (learning_rate <= 0) throw std::invalid_argument("train config: learning rate must be > 0");
  if (epochs < 1 || batch_size < 1) throw std::invalid_argument("train config: epochs/batch must be >= 1");
  if (m < 2) throw std::invalid_argument("train config: m must be >= 2");
  if (intermediate_width < 1) throw std::invalid_argument("train config: width must be >= 1");
}

template <typename Real>
NetParams<Real> NetParams<Real>::zeros(const NetConfig& cfg) {
  NetParams<Real> p;
  p.cfg = cfg;
  p.conv.assign(static_cast<size_t>(cfg.kernels) * cfg.channel_size(), Real(0));
  p.w1.assign(static_cast<size_t>(cfg.m) * cfg.width(), Real(0));
  p.b1.assign(cfg.m, Real(0));
  p.w2.assign(static_cast<size_t>(cfg.output_size()) * cfg.m, Real(0));
  p.b2.assign(cfg.output_size(), Real(0));
  return p;
}

template <typename Real>
NetParams<Real> NetParams<Real>::random(const NetConfig& cfg, std::uint64_t seed) {
  NetParams<Real> p = zeros(cfg);
  std::mt19937_64 rng(seed);
  auto fill = [&rng](std::vector<Real>& v, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    for (Real& x : v) x = static_cast<Real>(dist(rng));
  };
  fill(p.conv, 1.0 / std::sqrt(cfg.channel_size()));
  fill(p.w1, 1.0 / std::sqrt(cfg.width()));
  fill(p.b1, 0.01);
  fill(p.w2, 1.0 / std::sqrt(cfg.m));
  fill(p.b2, 0.01);
  return p;
}

template <typename Real>
std::vector<Real> encode(const CanonicalHand& hand, const NetConfig& cfg) {
  std::vector<Real> x(cfg.input_size(), Real(0));
  const int R = cfg.ranks;
  for (int seg = 0; seg < static_cast<int>(hand.segments.size()) && seg < cfg.s; ++seg)
    for (Card c : hand.segments[seg]) {
      const int suit = card_suit(c, R);
      const int rank = card_rank(c, R);
      x[(static_cast<size_t>(suit) * R + rank) * cfg.s + seg] = Real(1);
    }
  return x;
}

namespace {

// t[c*K + k] = <kernel k, channel c>, then ReLU.
template <typename Real>
void conv_forward(const NetParams<Real>& p, const Real* x, Real* t) {
  const NetConfig& cfg = p.cfg;
  const int cs = cfg.channel_size();
  for (int c = 0; c < cfg.suits; ++c) {
    const Real* xc = x + static_cast<size_t>(c) * cs;
    for (int k = 0; k < cfg.kernels; ++k) {
      const Real* ker = p.conv.data() + static_cast<size_t>(k) * cs;
      Real acc = 0;
      for (int i = 0; i < cs; ++i) acc += ker[i] * xc[i];
      t[static_cast<size_t>(c) * cfg.kernels + k] = acc;
    }
  }
}

template <typename Real>
void softmax_row(const Real* z, Real* phi, int m) {
  Real mx = z[0];
  for (int p = 1; p < m; ++p) mx = std::max(mx, z[p]);
  Real sum = 0;
  for (int p = 0; p < m; ++p) {
    phi[p] = std::exp(z[p] - mx);
    sum += phi[p];
  }
  for (int p = 0; p < m; ++p) phi[p] /= sum;
}

// Activations of one sample, reused by forward and backward.
template <typename Real>
struct Activations {
  std::vector<Real> t, u, z, phi, y;
  explicit Activations(const NetConfig& cfg)
      : t(cfg.width()), u(cfg.width()), z(cfg.m), phi(cfg.m), y(cfg.output_size()) {}
};

template <typename Real>
void forward_one(const NetParams<Real>& p, const Real* x, Activations<Real>& act) {
  const NetConfig& cfg = p.cfg;
  conv_forward(p, x, act.t.data());
  for (int w = 0; w < cfg.width(); ++w) act.u[w] = act.t[w] > Real(0) ? act.t[w] : Real(0);
  for (int q = 0; q < cfg.m; ++q) {
    const Real* row = p.w1.data() + static_cast<size_t>(q) * cfg.width();
    Real acc = p.b1[q];
    for (int w = 0; w < cfg.width(); ++w) acc += row[w] * act.u[w];
    act.z[q] = acc;
  }
  softmax_row(act.z.data(), act.phi.data(), cfg.m);
  for (int o = 0; o < cfg.output_size(); ++o) {
    const Real* row = p.w2.data() + static_cast<size_t>(o) * cfg.m;
    Real acc = p.b2[o];
    for (int q = 0; q < cfg.m; ++q) acc += row[q] * act.phi[q];
    act.y[o] = acc;
  }
}

}  // namespace

template <typename Real>
ForwardResult<Real> forward(const NetParams<Real>& params, std::span<const Real> x) {
  if (static_cast<int>(x.size()) != params.cfg.input_size())
    throw std::invalid_argument("forward: input size mismatch");
  Activations<Real> act(params.cfg);
  forward_one(params, x.data(), act);
  return {act.phi, act.y};
}

template <typename Real>
Real loss_and_grad(const NetParams<Real>& params, std::span<const Real> X, std::span<const Real> Y,
                   int batch, NetParams<Real>* grad) {
  const NetConfig& cfg = params.cfg;
  if (batch < 1) throw std::invalid_argument("loss_and_grad: empty batch");
  const int in = cfg.input_size(), out = cfg.output_size(), W = cfg.width(), m = cfg.m;
  if (grad) *grad = NetParams<Real>::zeros(cfg);

  // Forward pass for the whole batch; activations kept for the backward pass.
  std::vector<Real> T(static_cast<size_t>(batch) * W), U(static_cast<size_t>(batch) * W);
  std::vector<Real> PHI(static_cast<size_t>(batch) * m), DZ(static_cast<size_t>(batch) * m);
  std::vector<Real> DY(static_cast<size_t>(batch) * out);
  std::vector<Real> mse_per(batch);
  parallel_groups(batch, [&](int b) {
    Activations<Real> act(cfg);
    forward_one(params, X.data() + static_cast<size_t>(b) * in, act);
    std::copy(act.t.begin(), act.t.end(), T.begin() + static_cast<size_t>(b) * W);
    std::copy(act.u.begin(), act.u.end(), U.begin() + static_cast<size_t>(b) * W);
    std::copy(act.phi.begin(), act.phi.end(), PHI.begin() + static_cast<size_t>(b) * m);
    const Real* target = Y.data() + static_cast<size_t>(b) * out;
    Real se = 0;
    Real* dy = DY.data() + static_cast<size_t>(b) * out;
    const Real scale = Real(2) / (Real(batch) * Real(out));
    for (int o = 0; o < out; ++o) {
      const Real diff = act.y[o] - target[o];
      se += diff * diff;
      dy[o] = scale * diff;
    }
    mse_per[b] = se / Real(out);
  });
  Real mse = 0;
  for (int b = 0; b < batch; ++b) mse += mse_per[b];
  mse /= Real(batch);
  if (!grad) return mse;

  // dz via the softmax Jacobian, per sample.
  parallel_groups(batch, [&](int b) {
    const Real* dy = DY.data() + static_cast<size_t>(b) * out;
    const Real* phi = PHI.data() + static_cast<size_t>(b) * m;
    Real* dz = DZ.data() + static_cast<size_t>(b) * m;
    Real dot = 0;
    for (int q = 0; q < m; ++q) {
      Real dphi = 0;
      for (int o = 0; o < out; ++o) dphi += dy[o] * params.w2[static_cast<size_t>(o) * m + q];
      dz[q] = dphi;  // stash dphi
      dot += dphi * phi[q];
    }
    for (int q = 0; q < m; ++q) dz[q] = phi[q] * (dz[q] - dot);
  });

  // dW2[o][q] = sum_b dy[b][o] phi[b][q]; db2[o] = sum_b dy[b][o]
  parallel_groups(out, [&](int o) {
    Real* row = grad->w2.data() + static_cast<size_t>(o) * m;
    Real acc = 0;
    for (int b = 0; b < batch; ++b) {
      const Real dy = DY[static_cast<size_t>(b) * out + o];
      acc += dy;
      if (dy == Real(0)) continue;
      const Real* phi = PHI.data() + static_cast<size_t>(b) * m;
      for (int q = 0; q < m; ++q) row[q] += dy * phi[q];
    }
    grad->b2[o] = acc;
  });

  // dW1[q][w] = sum_b dz[b][q] u[b][w]; db1[q] = sum_b dz[b][q]
  parallel_groups(m, [&](int q) {
    Real* row = grad->w1.data() + static_cast<size_t>(q) * W;
    Real acc = 0;
    for (int b = 0; b < batch; ++b) {
      const Real dz = DZ[static_cast<size_t>(b) * m + q];
      acc += dz;
      if (dz == Real(0)) continue;
      const Real* u = U.data() + static_cast<size_t>(b) * W;
      for (int w = 0; w < W; ++w) row[w] += dz * u[w];
    }
    grad->b1[q] = acc;
  });

  // dT = (W1^T dz) masked by the rectifier; then fold onto the kernels:
  // dker[k][ij] = sum_b sum_c dT[b][c*K+k] x[b][c][ij]
  std::vector<Real> DT(static_cast<size_t>(batch) * W);
  parallel_groups(batch, [&](int b) {
    const Real* dz = DZ.data() + static_cast<size_t>(b) * m;
    const Real* t = T.data() + static_cast<size_t>(b) * W;
    Real* dt = DT.data() + static_cast<size_t>(b) * W;
    std::fill(dt, dt + W, Real(0));
    for (int q = 0; q < m; ++q) {
      const Real d = dz[q];
      if (d == Real(0)) continue;
      const Real* row = params.w1.data() + static_cast<size_t>(q) * W;
      for (int w = 0; w < W; ++w) dt[w] += d * row[w];
    }
    for (int w = 0; w < W; ++w)
      if (t[w] <= Real(0)) dt[w] = Real(0);
  });
  const int cs = cfg.channel_size();
  parallel_groups(cfg.kernels, [&](int k) {
    Real* row = grad->conv.data() + static_cast<size_t>(k) * cs;
    for (int b = 0; b < batch; ++b) {
      const Real* x = X.data() + static_cast<size_t>(b) * in;
      const Real* dt = DT.data() + static_cast<size_t>(b) * W;
      for (int c = 0; c < cfg.suits; ++c) {
        const Real d = dt[static_cast<size_t>(c) * cfg.kernels + k];
        if (d == Real(0)) continue;
        const Real* xc = x + static_cast<size_t>(c) * cs;
        for (int i = 0; i < cs; ++i) row[i] += d * xc[i];
      }
    }
  });
  return mse;
}

template <typename Real>
void sgd_step(NetParams<Real>& params, const NetParams<Real>& grad, Real lr) {
  auto upd = [lr](std::vector<Real>& p, const std::vector<Real>& g) {
    for (size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
  };
  upd(params.conv, grad.conv);
  upd(params.w1, grad.w1);
  upd(params.b1, grad.b1);
  upd(params.w2, grad.w2);
  upd(params.b2, grad.b2);
}

NetParams<float> train_round(const Game& game, const StrengthLibrary& strength, int round,
                             const TrainConfig& tc, TrainReport* report) {
  tc.validate();
  const GameConfig& g = game.cfg;
  NetConfig nc;
  nc.suits = g.num_suits;
  nc.ranks = g.num_ranks;
  nc.s = round + 1;
  if (tc.intermediate_width % g.num_suits != 0)
    throw std::invalid_argument("train_round: width must be divisible by suit count");
  nc.kernels = tc.intermediate_width / g.num_suits;
  nc.m = tc.m;

  const int n = game.indexer.num_classes(round);
  const int in = nc.input_size(), out = nc.output_size();
  std::vector<float> X(static_cast<size_t>(n) * in), Y(static_cast<size_t>(n) * out);
  for (int cls = 0; cls < n; ++cls) {
    const auto x = encode<float>(game.indexer.representative(round, cls), nc);
    std::copy(x.begin(), x.end(), X.begin() + static_cast<size_t>(cls) * in);
    const auto rows = strength.tensor(round, cls);
    for (int r = 0; r <= round; ++r)
      for (int j = 0; j < 3; ++j)
        Y[static_cast<size_t>(cls) * out + r * 3 + j] = static_cast<float>(rows[r][j]);
  }

  NetParams<float> params = NetParams<float>::random(nc, tc.seed);
  NetParams<float> grad;
  std::mt19937_64 rng(tc.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<float> bx, by;
  if (report) report->epoch_mse.clear();
  for (int epoch = 0; epoch < tc.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0;
    int batches = 0;
    for (int start = 0; start < n; start += tc.batch_size) {
      const int bsz = std::min(tc.batch_size, n - start);
      bx.resize(static_cast<size_t>(bsz) * in);
      by.resize(static_cast<size_t>(bsz) * out);
      for (int i = 0; i < bsz; ++i) {
        const int cls = order[start + i];
        std::copy_n(X.begin() + static_cast<size_t>(cls) * in, in, bx.begin() + static_cast<size_t>(i) * in);
        std::copy_n(Y.begin() + static_cast<size_t>(cls) * out, out, by.begin() + static_cast<size_t>(i) * out);
      }
      const float mse = loss_and_grad<float>(params, bx, by, bsz, &grad);
      sgd_step(params, grad, static_cast<float>(tc.learning_rate));
      epoch_loss += mse;
      ++batches;
    }
    if (report) report->epoch_mse.push_back(epoch_loss / batches);
  }
  if (report) {
    const float final_mse = loss_and_grad<float>(params, X, Y, n, nullptr);
    report->final_mse = final_mse;
  }
  return params;
}

std::vector<double> build_coordinates(const NetParams<float>& params, const Game& game, int round) {
  const int n = game.indexer.num_classes(round);
  const int m = params.cfg.m;
  std::vector<double> coords(static_cast<size_t>(n) * m);
  parallel_groups(n, [&](int cls) {
    const auto x = encode<float>(game.indexer.representative(round, cls), params.cfg);
    Activations<float> act(params.cfg);
    forward_one(params, x.data(), act);
    double sum = 0;
    for (int p = 0; p < m; ++p) sum += static_cast<double>(act.phi[p]);
    for (int p = 0; p < m; ++p)
      coords[static_cast<size_t>(cls) * m + p] = static_cast<double>(act.phi[p]) / sum;
  });
  return coords;
}

// ---------------------------------------------------------------------------
// Checkpoint: magic "ECFRNET1", dims (suits, ranks, s, K, m) as LE int32,
// then conv, w1, b1, w2, b2 row-major LE float32.

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f32(std::ostream& os, const std::vector<float>& v) {
  for (float x : v) {
    std::uint32_t bits;
    std::memcpy(&bits, &x, 4);
    write_u32(os, bits);
  }
}

void read_f32(std::istream& is, std::vector<float>& v) {
  for (float& x : v) {
    std::uint32_t bits = read_u32(is);
    std::memcpy(&x, &bits, 4);
  }
}

}  // namespace

void save_net(const std::string& path, const NetParams<float>& p) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write net checkpoint: " + path);
  os.write("ECFRNET1", 8);
  write_u32(os, p.cfg.suits);
  write_u32(os, p.cfg.ranks);
  write_u32(os, p.cfg.s);
  write_u32(os, p.cfg.kernels);
  write_u32(os, p.cfg.m);
  write_f32(os, p.conv);
  write_f32(os, p.w1);
  write_f32(os, p.b1);
  write_f32(os, p.w2);
  write_f32(os, p.b2);
  if (!os) throw std::runtime_error("short write on net checkpoint: " + path);
}

NetParams<float> load_net(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open net checkpoint: " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || std::string(magic, 8) != "ECFRNET1")
    throw std::runtime_error("bad magic in net checkpoint: " + path);
  NetConfig cfg;
  cfg.suits = static_cast<int>(read_u32(is));
  cfg.ranks = static_cast<int>(read_u32(is));
  cfg.s = static_cast<int>(read_u32(is));
  cfg.kernels = static_cast<int>(read_u32(is));
  cfg.m = static_cast<int>(read_u32(is));
  NetParams<float> p = NetParams<float>::zeros(cfg);
  read_f32(is, p.conv);
  read_f32(is, p.w1);
  read_f32(is, p.b1);
  read_f32(is, p.w2);
  read_f32(is, p.b2);
  if (!is) throw std::runtime_error("truncated net checkpoint: " + path);
  return p;
}

void export_coordinates_csv(std::ostream& os, const std::vector<double>& coords, int m) {
  os << "canonical_hand_id";
  for (int p = 0; p < m; ++p) os << ",phi" << p;
  os << "\n";
  char buf[64];
  const int n = static_cast<int>(coords.size()) / m;
  for (int cls = 0; cls < n; ++cls) {
    os << cls;
    for (int p = 0; p < m; ++p) {
      std::snprintf(buf, sizeof buf, ",%.9g", coords[static_cast<size_t>(cls) * m + p]);
      os << buf;
    }
    os << "\n";
  }
}

// Explicit instantiations: float for production, double for gradient checks.
template struct NetParams<float>;
template struct NetParams<double>;
template std::vector<float> encode<float>(const CanonicalHand&, const NetConfig&);
template std::vector<double> encode<double>(const CanonicalHand&, const NetConfig&);
template ForwardResult<float> forward<float>(const NetParams<float>&, std::span<const float>);
template ForwardResult<double> forward<double>(const NetParams<double>&, std::span<const double>);
template float loss_and_grad<float>(const NetParams<float>&, std::span<const float>,
                                    std::span<const float>, int, NetParams<float>*);
template double loss_and_grad<double>(const NetParams<double>&, std::span<const double>,
                                      std::span<const double>, int, NetParams<double>*);
template void sgd_step<float>(NetParams<float>&, const NetParams<float>&, float);
template void sgd_step<double>(NetParams<double>&, const NetParams<double>&, double);

}  // namespace ecfr
