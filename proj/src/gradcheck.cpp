#include "polarity/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "polarity/error.hpp"
#include "polarity/rng.hpp"

namespace polarity {

namespace {

// The finite-difference oracle evaluates losses in extended precision so
// its own roundoff stays well below the 1e-4 tolerance even for near-zero
// gradients. The model under test stays in double.
template <typename T>
T window_loss(const LstmParams<T>& params, const Window& w) {
  LstmState<T> state(params.layers, w.batch, params.hidden);
  LstmCache<T> cache;
  return lstm_forward<T>(params, w, state, cache, T(0), nullptr);
}

template <typename T>
LstmParams<T> widen(const LstmParams<double>& p) {
  LstmParams<T> out(p.vocab, p.embed, p.hidden, p.layers);
  std::vector<const double*> src;
  p.visit([&](const std::string&, const double* v, std::size_t, std::size_t, std::size_t) {
    src.push_back(v);
  });
  std::size_t idx = 0;
  out.visit([&](const std::string&, T* v, std::size_t n, std::size_t, std::size_t) {
    for (std::size_t k = 0; k < n; ++k) v[k] = src[idx][k];
    ++idx;
  });
  return out;
}

#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__)
// Quad-precision central difference for parameters whose gradient is so
// close to zero that long double truncation noise dominates the ratio.
double quad_numeric(LstmParams<__float128>& wide, const Window& w, std::size_t block,
                    std::size_t k) {
  const __float128 eps = 1e-9Q;
  __float128 up = 0, down = 0;
  std::size_t idx = 0;
  wide.visit([&](const std::string&, __float128* v, std::size_t n, std::size_t, std::size_t) {
    if (idx++ != block) return;
    (void)n;
    const __float128 saved = v[k];
    v[k] = saved + eps;
    up = window_loss<__float128>(wide, w);
    v[k] = saved - eps;
    down = window_loss<__float128>(wide, w);
    v[k] = saved;
  });
  return static_cast<double>((up - down) / (2 * eps));
}
#endif

}  // namespace

GradCheckResult gradient_check(const GradCheckSpec& spec) {
  if (spec.epsilon <= 0.0) throw ArgumentError("gradient_check: epsilon must be > 0");
  Rng rng(spec.seed);

  LstmParams<double> params(spec.vocab, spec.embed, spec.hidden, spec.layers);
  params.init_uniform(rng, 0.5);  // wide init keeps gates off their saturated tails

  Window w;
  w.batch = spec.batch;
  w.steps = spec.steps;
  w.inputs.resize(spec.batch * spec.steps);
  w.targets.resize(spec.batch * spec.steps);
  for (int& id : w.inputs) id = static_cast<int>(rng.uniform_index(spec.vocab));
  for (int& id : w.targets) id = static_cast<int>(rng.uniform_index(spec.vocab));

  LstmState<double> state(spec.layers, spec.batch, spec.hidden);
  LstmCache<double> cache;
  lstm_forward<double>(params, w, state, cache, 0.0, nullptr);
  LstmParams<double> grads(spec.vocab, spec.embed, spec.hidden, spec.layers);
  lstm_backward<double>(params, w, cache, grads);

  // flatten analytic gradients in visit order
  std::vector<double> analytic;
  grads.visit([&](const std::string&, const double* v, std::size_t n, std::size_t, std::size_t) {
    analytic.insert(analytic.end(), v, v + n);
  });

  GradCheckResult result;
  result.param_count = analytic.size();
  LstmParams<long double> wide = widen<long double>(params);
#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__)
  LstmParams<__float128> quad = widen<__float128>(params);
#endif
  const long double eps = static_cast<long double>(spec.epsilon);
  std::size_t offset = 0;
  std::size_t block = 0;
  wide.visit([&](const std::string&, long double* v, std::size_t n, std::size_t, std::size_t) {
    for (std::size_t k = 0; k < n; ++k) {
      const long double saved = v[k];
      auto at = [&](long double delta) {
        v[k] = saved + delta;
        const long double loss = window_loss(wide, w);
        v[k] = saved;
        return loss;
      };
      // 4th-order central stencil: the eps^2 truncation term cancels
      const long double numeric_ld =
          (-at(2 * eps) + 8 * at(eps) - 8 * at(-eps) + at(-2 * eps)) / (12 * eps);
      double numeric = static_cast<double>(numeric_ld);
      const double a = analytic[offset + k];
      double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-12});
#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__)
      if (rel > 1e-5) {
        // near-zero gradient: resolve it with quad-precision differences
        numeric = quad_numeric(quad, w, block, k);
        rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-12});
      }
#endif
      result.max_rel_error = std::max(result.max_rel_error, rel);
    }
    offset += n;
    ++block;
  });
  return result;
}

double gradient_check_many(std::size_t runs, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t r = 0; r < runs; ++r) {
    GradCheckSpec spec;
    spec.vocab = 3 + rng.uniform_index(6);   // 3..8
    spec.embed = 2 + rng.uniform_index(7);   // 2..8
    spec.hidden = 2 + rng.uniform_index(7);
    spec.layers = 1 + rng.uniform_index(2);
    spec.batch = 1 + rng.uniform_index(3);
    spec.steps = 1 + rng.uniform_index(4);
    spec.seed = rng.next_u64();
    worst = std::max(worst, gradient_check(spec).max_rel_error);
  }
  return worst;
}

}  // namespace polarity
