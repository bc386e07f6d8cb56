#ifndef POLARITY_GRADCHECK_HPP
#define POLARITY_GRADCHECK_HPP

#include <cstdint>
#include <cstddef>

#include "polarity/lstm.hpp"

namespace polarity {

struct GradCheckSpec {
  std::size_t vocab = 7;
  std::size_t embed = 4;
  std::size_t hidden = 5;
  std::size_t layers = 2;
  std::size_t batch = 2;
  std::size_t steps = 3;
  double epsilon = 2e-4;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t param_count = 0;
};

// Compares the analytic backward pass against central finite differences for
// every parameter, in double precision, on a random tiny model and window.
GradCheckResult gradient_check(const GradCheckSpec& spec);

// Convenience: max over `runs` random configurations with dims <= 8.
double gradient_check_many(std::size_t runs, std::uint64_t seed);

}  // namespace polarity

#endif  // POLARITY_GRADCHECK_HPP
