#ifndef POLARITY_LSTM_HPP
#define POLARITY_LSTM_HPP

#include <cmath>
#include <cstddef>

#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__)
#include <quadmath.h>
#endif
#include <string>
#include <type_traits>
#include <vector>

#include "polarity/rng.hpp"

namespace polarity {

// Row-major matrix on a flat buffer.
template <typename T>
struct Mat {
  std::vector<T> a;
  std::size_t rows = 0, cols = 0;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : a(r * c, T{}), rows(r), cols(c) {}

  T* row(std::size_t r) { return a.data() + r * cols; }
  const T* row(std::size_t r) const { return a.data() + r * cols; }
  void zero() { std::fill(a.begin(), a.end(), T{}); }
};

namespace detail {

// Math dispatch so the net can be instantiated with __float128 for the
// finite-difference gradient oracle.
template <typename T>
inline T m_exp(T x) { return std::exp(x); }
template <typename T>
inline T m_tanh(T x) { return std::tanh(x); }
template <typename T>
inline T m_log(T x) { return std::log(x); }

#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__)
inline __float128 m_exp(__float128 x) { return expq(x); }
inline __float128 m_tanh(__float128 x) { return tanhq(x); }
inline __float128 m_log(__float128 x) { return logq(x); }
#endif

// Dot product with four fixed accumulators. The reassociation is explicit
// and identical on every run, so results are bit-reproducible.
template <typename T>
inline T dot4(const T* x, const T* y, std::size_t n) {
  T s0{}, s1{}, s2{}, s3{};
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += x[k] * y[k];
    s1 += x[k + 1] * y[k + 1];
    s2 += x[k + 2] * y[k + 2];
    s3 += x[k + 3] * y[k + 3];
  }
  T tail{};
  for (; k < n; ++k) tail += x[k] * y[k];
  return ((s0 + s1) + (s2 + s3)) + tail;
}

template <typename T>
inline void axpy(T alpha, const T* x, T* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

template <typename T>
inline T sigmoid(T x) {
  return T(1) / (T(1) + m_exp(-x));
}

}  // namespace detail

// out[B x R] (+)= X[B x C] . W[R x C]^T
template <typename T>
void matmul_nt(const Mat<T>& x, const Mat<T>& w, Mat<T>& out, bool accumulate) {
  for (std::size_t b = 0; b < x.rows; ++b) {
    const T* xb = x.row(b);
    T* ob = out.row(b);
    for (std::size_t r = 0; r < w.rows; ++r) {
      const T v = detail::dot4(xb, w.row(r), w.cols);
      if (accumulate) {
        ob[r] += v;
      } else {
        ob[r] = v;
      }
    }
  }
}

// out[B x C] (+)= D[B x R] . W[R x C]
template <typename T>
void matmul_nn(const Mat<T>& d, const Mat<T>& w, Mat<T>& out, bool accumulate) {
  for (std::size_t b = 0; b < d.rows; ++b) {
    const T* db = d.row(b);
    T* ob = out.row(b);
    if (!accumulate) std::fill(ob, ob + out.cols, T{});
    for (std::size_t r = 0; r < w.rows; ++r) {
      detail::axpy(db[r], w.row(r), ob, w.cols);
    }
  }
}

// gW[R x C] += D[B x R]^T . X[B x C]
template <typename T>
void accumulate_outer(const Mat<T>& d, const Mat<T>& x, Mat<T>& gw) {
  for (std::size_t b = 0; b < d.rows; ++b) {
    const T* db = d.row(b);
    const T* xb = x.row(b);
    for (std::size_t r = 0; r < gw.rows; ++r) {
      detail::axpy(db[r], xb, gw.row(r), gw.cols);
    }
  }
}

// Word-level LSTM language model parameters. Gate blocks are laid out
// [input, forget, cell, output] along the 4H axis.
template <typename T>
struct LstmParams {
  std::size_t vocab = 0, embed = 0, hidden = 0, layers = 0;

  Mat<T> embedding;  // V x E
  struct Layer {
    Mat<T> w_ih;          // 4H x in (in = E for layer 0, H above)
    Mat<T> w_hh;          // 4H x H
    std::vector<T> bias;  // 4H
  };
  std::vector<Layer> lstm;
  Mat<T> w_out;            // V x H
  std::vector<T> b_out;    // V

  LstmParams() = default;
  LstmParams(std::size_t v, std::size_t e, std::size_t h, std::size_t l)
      : vocab(v), embed(e), hidden(h), layers(l), embedding(v, e), w_out(v, h), b_out(v, T{}) {
    for (std::size_t i = 0; i < l; ++i) {
      const std::size_t in = (i == 0) ? e : h;
      lstm.push_back(Layer{Mat<T>(4 * h, in), Mat<T>(4 * h, h), std::vector<T>(4 * h, T{})});
    }
  }

  // Weights uniform in [-range, range]; biases zero except forget gate +1.
  // The default range widens for small hidden sizes (1/sqrt(H)) so desk-scale
  // nets start with usable signal through stacked layers; at 650 dims it
  // matches the reference +-0.1.
  T default_init_range() const {
    const T scaled = T(2) / static_cast<T>(std::sqrt(double(hidden)));
    return std::max(T(0.1), std::min(T(0.5), scaled));
  }

  void init_uniform(Rng& rng, T range = T(0.1)) {
    auto fill = [&](std::vector<T>& v) {
      for (T& x : v) x = static_cast<T>(rng.uniform(-double(range), double(range)));
    };
    fill(embedding.a);
    for (Layer& l : lstm) {
      fill(l.w_ih.a);
      fill(l.w_hh.a);
      std::fill(l.bias.begin(), l.bias.end(), T{});
      for (std::size_t k = hidden; k < 2 * hidden; ++k) l.bias[k] = T(1);
    }
    fill(w_out.a);
    std::fill(b_out.begin(), b_out.end(), T{});
  }

  // Visits every parameter buffer in a fixed, documented order. Used by the
  // optimizer, gradient clipping, serialization and the gradient checker.
  template <typename F>
  void visit(F&& f) {
    f("embedding", embedding.a.data(), embedding.a.size(), embedding.rows, embedding.cols);
    for (std::size_t i = 0; i < lstm.size(); ++i) {
      const std::string p = "lstm" + std::to_string(i);
      f(p + ".w_ih", lstm[i].w_ih.a.data(), lstm[i].w_ih.a.size(), lstm[i].w_ih.rows,
        lstm[i].w_ih.cols);
      f(p + ".w_hh", lstm[i].w_hh.a.data(), lstm[i].w_hh.a.size(), lstm[i].w_hh.rows,
        lstm[i].w_hh.cols);
      f(p + ".bias", lstm[i].bias.data(), lstm[i].bias.size(), lstm[i].bias.size(),
        std::size_t(1));
    }
    f("w_out", w_out.a.data(), w_out.a.size(), w_out.rows, w_out.cols);
    f("b_out", b_out.data(), b_out.size(), b_out.size(), std::size_t(1));
  }

  template <typename F>
  void visit(F&& f) const {
    const_cast<LstmParams*>(this)->visit([&](const std::string& name, T* p, std::size_t n,
                                             std::size_t r, std::size_t c) {
      f(name, static_cast<const T*>(p), n, r, c);
    });
  }

  std::size_t param_count() const {
    std::size_t n = 0;
    visit([&](const std::string&, const T*, std::size_t len, std::size_t, std::size_t) { n += len; });
    return n;
  }
};

// Recurrent state, one (h, c) pair per layer, batch-major rows.
template <typename T>
struct LstmState {
  std::vector<Mat<T>> h, c;

  LstmState() = default;
  LstmState(std::size_t layers, std::size_t batch, std::size_t hidden) {
    for (std::size_t l = 0; l < layers; ++l) {
      h.emplace_back(batch, hidden);
      c.emplace_back(batch, hidden);
    }
  }
  void zero() {
    for (auto& m : h) m.zero();
    for (auto& m : c) m.zero();
  }
};

// One training window: time-major token ids, inputs[t*batch + b].
struct Window {
  std::size_t batch = 0, steps = 0;
  std::vector<int> inputs;
  std::vector<int> targets;
};

// Forward activations kept for the backward pass.
template <typename T>
struct LstmCache {
  std::size_t batch = 0, steps = 0;
  std::vector<Mat<T>> layer_in;             // [t*layers + l]: input fed to layer l
  std::vector<Mat<T>> gates;                // [t*layers + l]: B x 4H post-activation
  std::vector<Mat<T>> cell, tanh_cell, hid; // [t*layers + l]: B x H
  std::vector<Mat<T>> probs;                // [t]: B x V softmax
  std::vector<Mat<T>> emb_mask;             // [t]: B x E dropout mask (empty = off)
  std::vector<Mat<T>> mid_mask;             // [t*(layers-1) + l]: B x H
  LstmState<T> state_in;                    // state at window start
};

// Runs the window forward, mutating `state` (carried across windows) and
// filling `cache`. Dropout uses inverted masks drawn from `dropout_rng`;
// pass nullptr for evaluation mode. Returns the mean cross-entropy per
// predicted token.
template <typename T>
T lstm_forward(const LstmParams<T>& p, const Window& w, LstmState<T>& state, LstmCache<T>& cache,
               T dropout, Rng* dropout_rng) {
  const std::size_t B = w.batch, S = w.steps, H = p.hidden, V = p.vocab, L = p.layers;
  cache.batch = B;
  cache.steps = S;
  cache.state_in = state;
  cache.layer_in.assign(S * L, Mat<T>());
  cache.gates.assign(S * L, Mat<T>());
  cache.cell.assign(S * L, Mat<T>());
  cache.tanh_cell.assign(S * L, Mat<T>());
  cache.hid.assign(S * L, Mat<T>());
  cache.probs.assign(S, Mat<T>());
  const bool use_dropout = dropout_rng != nullptr && dropout > T(0);
  cache.emb_mask.assign(use_dropout ? S : 0, Mat<T>());
  cache.mid_mask.assign(use_dropout && L > 1 ? S * (L - 1) : 0, Mat<T>());

  auto draw_mask = [&](Mat<T>& m, std::size_t r, std::size_t c) {
    m = Mat<T>(r, c);
    const T keep = T(1) - dropout;
    for (T& x : m.a) x = (dropout_rng->next_unit() >= double(dropout)) ? T(1) / keep : T(0);
  };

  using Acc = std::conditional_t<(sizeof(T) > sizeof(double)), T, double>;
  Acc loss_sum = Acc(0);
  Mat<T> gate_pre(B, 4 * H);
  for (std::size_t t = 0; t < S; ++t) {
    // embedding lookup (+ dropout on the embedding output)
    Mat<T> x(B, p.embed);
    for (std::size_t b = 0; b < B; ++b) {
      const int id = w.inputs[t * B + b];
      const T* e = p.embedding.row(static_cast<std::size_t>(id));
      std::copy(e, e + p.embed, x.row(b));
    }
    if (use_dropout) {
      draw_mask(cache.emb_mask[t], B, p.embed);
      for (std::size_t k = 0; k < x.a.size(); ++k) x.a[k] *= cache.emb_mask[t].a[k];
    }

    for (std::size_t l = 0; l < L; ++l) {
      const std::size_t tl = t * L + l;
      cache.layer_in[tl] = x;

      matmul_nt(x, p.lstm[l].w_ih, gate_pre, false);
      matmul_nt(state.h[l], p.lstm[l].w_hh, gate_pre, true);
      Mat<T>& gates = cache.gates[tl];
      gates = Mat<T>(B, 4 * H);
      Mat<T>& c_new = cache.cell[tl];
      c_new = Mat<T>(B, H);
      Mat<T>& tc = cache.tanh_cell[tl];
      tc = Mat<T>(B, H);
      Mat<T>& h_new = cache.hid[tl];
      h_new = Mat<T>(B, H);

      for (std::size_t b = 0; b < B; ++b) {
        const T* pre = gate_pre.row(b);
        const T* bias = p.lstm[l].bias.data();
        T* g = gates.row(b);
        const T* c_prev = state.c[l].row(b);
        T* cb = c_new.row(b);
        T* tb = tc.row(b);
        T* hb = h_new.row(b);
        for (std::size_t k = 0; k < H; ++k) {
          const T gi = detail::sigmoid(pre[k] + bias[k]);
          const T gf = detail::sigmoid(pre[H + k] + bias[H + k]);
          const T gg = detail::m_tanh(pre[2 * H + k] + bias[2 * H + k]);
          const T go = detail::sigmoid(pre[3 * H + k] + bias[3 * H + k]);
          g[k] = gi;
          g[H + k] = gf;
          g[2 * H + k] = gg;
          g[3 * H + k] = go;
          cb[k] = gf * c_prev[k] + gi * gg;
          tb[k] = detail::m_tanh(cb[k]);
          hb[k] = go * tb[k];
        }
      }
      state.h[l] = h_new;
      state.c[l] = c_new;

      x = h_new;
      if (use_dropout && l + 1 < L) {
        Mat<T>& m = cache.mid_mask[t * (L - 1) + l];
        draw_mask(m, B, H);
        for (std::size_t k = 0; k < x.a.size(); ++k) x.a[k] *= m.a[k];
      }
    }

    // output projection + softmax (top layer output, no dropout)
    Mat<T>& probs = cache.probs[t];
    probs = Mat<T>(B, V);
    matmul_nt(cache.hid[t * L + (L - 1)], p.w_out, probs, false);
    for (std::size_t b = 0; b < B; ++b) {
      T* row = probs.row(b);
      for (std::size_t v = 0; v < V; ++v) row[v] += p.b_out[v];
      T mx = row[0];
      for (std::size_t v = 1; v < V; ++v) mx = std::max(mx, row[v]);
      T denom{};
      for (std::size_t v = 0; v < V; ++v) {
        row[v] = detail::m_exp(row[v] - mx);
        denom += row[v];
      }
      const T inv = T(1) / denom;
      for (std::size_t v = 0; v < V; ++v) row[v] *= inv;
      const int target = w.targets[t * B + b];
      loss_sum += -detail::m_log(Acc(row[static_cast<std::size_t>(target)]));
    }
  }
  return static_cast<T>(loss_sum / Acc(B * S));
}

// Backpropagation through the cached window. Gradients are accumulated into
// `grads` (same shapes as the parameters). Gradient into the carried-in
// state is dropped: that is the truncation in truncated BPTT.
template <typename T>
void lstm_backward(const LstmParams<T>& p, const Window& w, const LstmCache<T>& cache,
                   LstmParams<T>& grads) {
  const std::size_t B = w.batch, S = w.steps, H = p.hidden, V = p.vocab, L = p.layers;
  const T scale = T(1) / T(B * S);
  const bool use_dropout = !cache.emb_mask.empty();

  std::vector<Mat<T>> dh_time(L), dc_time(L);
  for (std::size_t l = 0; l < L; ++l) {
    dh_time[l] = Mat<T>(B, H);
    dc_time[l] = Mat<T>(B, H);
  }

  Mat<T> dlogits(B, V);
  Mat<T> dh_above(B, H);
  Mat<T> da(B, 4 * H);
  for (std::size_t t = S; t-- > 0;) {
    // softmax + cross-entropy gradient
    dlogits = cache.probs[t];
    for (std::size_t b = 0; b < B; ++b) {
      T* row = dlogits.row(b);
      row[static_cast<std::size_t>(w.targets[t * B + b])] -= T(1);
      for (std::size_t v = 0; v < V; ++v) row[v] *= scale;
    }
    accumulate_outer(dlogits, cache.hid[t * L + (L - 1)], grads.w_out);
    for (std::size_t b = 0; b < B; ++b) {
      const T* row = dlogits.row(b);
      for (std::size_t v = 0; v < V; ++v) grads.b_out[v] += row[v];
    }
    matmul_nn(dlogits, p.w_out, dh_above, false);

    for (std::size_t l = L; l-- > 0;) {
      const std::size_t tl = t * L + l;
      const Mat<T>& gates = cache.gates[tl];
      const Mat<T>& tc = cache.tanh_cell[tl];
      const Mat<T>& c_prev = (t > 0) ? cache.cell[(t - 1) * L + l] : cache.state_in.c[l];
      const Mat<T>& h_prev = (t > 0) ? cache.hid[(t - 1) * L + l] : cache.state_in.h[l];

      for (std::size_t b = 0; b < B; ++b) {
        const T* g = gates.row(b);
        const T* tcb = tc.row(b);
        const T* cpb = c_prev.row(b);
        const T* dha = dh_above.row(b);
        T* dht = dh_time[l].row(b);
        T* dct = dc_time[l].row(b);
        T* dab = da.row(b);
        for (std::size_t k = 0; k < H; ++k) {
          const T gi = g[k], gf = g[H + k], gg = g[2 * H + k], go = g[3 * H + k];
          const T dh = dht[k] + dha[k];
          const T do_ = dh * tcb[k];
          const T dc = dct[k] + dh * go * (T(1) - tcb[k] * tcb[k]);
          dab[3 * H + k] = do_ * go * (T(1) - go);
          dab[k] = dc * gg * gi * (T(1) - gi);
          dab[2 * H + k] = dc * gi * (T(1) - gg * gg);
          dab[H + k] = dc * cpb[k] * gf * (T(1) - gf);
          dct[k] = dc * gf;
        }
      }

      accumulate_outer(da, cache.layer_in[tl], grads.lstm[l].w_ih);
      accumulate_outer(da, h_prev, grads.lstm[l].w_hh);
      for (std::size_t b = 0; b < B; ++b) {
        const T* dab = da.row(b);
        for (std::size_t k = 0; k < 4 * H; ++k) grads.lstm[l].bias[k] += dab[k];
      }
      matmul_nn(da, p.lstm[l].w_hh, dh_time[l], false);

      Mat<T> dinp(B, p.lstm[l].w_ih.cols);
      matmul_nn(da, p.lstm[l].w_ih, dinp, false);
      if (l > 0) {
        if (use_dropout) {
          const Mat<T>& m = cache.mid_mask[t * (L - 1) + (l - 1)];
          for (std::size_t k = 0; k < dinp.a.size(); ++k) dinp.a[k] *= m.a[k];
        }
        dh_above = dinp;
      } else {
        if (use_dropout) {
          const Mat<T>& m = cache.emb_mask[t];
          for (std::size_t k = 0; k < dinp.a.size(); ++k) dinp.a[k] *= m.a[k];
        }
        for (std::size_t b = 0; b < B; ++b) {
          const int id = w.inputs[t * B + b];
          detail::axpy(T(1), dinp.row(b), grads.embedding.row(static_cast<std::size_t>(id)),
                       p.embed);
        }
      }
    }
  }
}

// Global-norm gradient clipping; returns the pre-clip norm.
template <typename T>
double clip_gradients(LstmParams<T>& grads, double max_norm) {
  double sq = 0.0;
  grads.visit([&](const std::string&, const T* v, std::size_t n, std::size_t, std::size_t) {
    for (std::size_t k = 0; k < n; ++k) sq += double(v[k]) * double(v[k]);
  });
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const T f = static_cast<T>(max_norm / norm);
    grads.visit([&](const std::string&, T* v, std::size_t n, std::size_t, std::size_t) {
      for (std::size_t k = 0; k < n; ++k) v[k] *= f;
    });
  }
  return norm;
}

template <typename T>
void sgd_step(LstmParams<T>& params, const LstmParams<T>& grads, T lr) {
  auto it = [&](T* dst, const T* src, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) dst[k] -= lr * src[k];
  };
  it(params.embedding.a.data(), grads.embedding.a.data(), params.embedding.a.size());
  for (std::size_t l = 0; l < params.lstm.size(); ++l) {
    it(params.lstm[l].w_ih.a.data(), grads.lstm[l].w_ih.a.data(), params.lstm[l].w_ih.a.size());
    it(params.lstm[l].w_hh.a.data(), grads.lstm[l].w_hh.a.data(), params.lstm[l].w_hh.a.size());
    it(params.lstm[l].bias.data(), grads.lstm[l].bias.data(), params.lstm[l].bias.size());
  }
  it(params.w_out.a.data(), grads.w_out.a.data(), params.w_out.a.size());
  it(params.b_out.data(), grads.b_out.data(), params.b_out.size());
}

// Evaluation-mode step for one batch row: feeds `id`, returns nothing;
// log-probabilities are read with lstm_logprobs below.
template <typename T>
void lstm_step_eval(const LstmParams<T>& p, int id, LstmState<T>& state) {
  const std::size_t H = p.hidden, L = p.layers;
  std::vector<T> x(p.embedding.row(static_cast<std::size_t>(id)),
                   p.embedding.row(static_cast<std::size_t>(id)) + p.embed);
  std::vector<T> pre(4 * H);
  for (std::size_t l = 0; l < L; ++l) {
    const auto& lay = p.lstm[l];
    for (std::size_t k = 0; k < 4 * H; ++k) {
      pre[k] = detail::dot4(x.data(), lay.w_ih.row(k), lay.w_ih.cols) +
               detail::dot4(state.h[l].row(0), lay.w_hh.row(k), H) + lay.bias[k];
    }
    T* h = state.h[l].row(0);
    T* c = state.c[l].row(0);
    x.assign(H, T{});
    for (std::size_t k = 0; k < H; ++k) {
      const T gi = detail::sigmoid(pre[k]);
      const T gf = detail::sigmoid(pre[H + k]);
      const T gg = detail::m_tanh(pre[2 * H + k]);
      const T go = detail::sigmoid(pre[3 * H + k]);
      c[k] = gf * c[k] + gi * gg;
      const T tc = detail::m_tanh(c[k]);
      h[k] = go * tc;
      x[k] = h[k];
    }
  }
}

// Log-probabilities of every next token given the current state (double
// accumulation keeps softmax sums well normalized even with float params).
template <typename T>
std::vector<double> lstm_logprobs(const LstmParams<T>& p, const LstmState<T>& state) {
  const std::size_t V = p.vocab, H = p.hidden;
  std::vector<double> logits(V);
  const T* h = state.h[p.layers - 1].row(0);
  for (std::size_t v = 0; v < V; ++v) {
    logits[v] = double(detail::dot4(h, p.w_out.row(v), H)) + double(p.b_out[v]);
  }
  double mx = logits[0];
  for (double z : logits) mx = std::max(mx, z);
  double denom = 0.0;
  for (double z : logits) denom += std::exp(z - mx);
  const double log_denom = mx + std::log(denom);
  for (double& z : logits) z -= log_denom;
  return logits;
}

}  // namespace polarity

#endif  // POLARITY_LSTM_HPP
