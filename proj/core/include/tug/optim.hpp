#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tug {

// Adam with bias correction (beta1=0.9, beta2=0.999, eps=1e-8 defaults).
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t param_count, double learning_rate,
                double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  void step(std::span<double> params, std::span<const double> grad);

  std::size_t steps_taken() const noexcept { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

// Scales grad in place so its L2 norm does not exceed max_norm.
// Returns the pre-clip norm.
double clip_global_norm(std::span<double> grad, double max_norm);

}  // namespace tug
