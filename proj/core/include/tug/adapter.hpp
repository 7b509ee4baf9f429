#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tug/features.hpp"
#include "tug/rng.hpp"

namespace tug {

enum class AdapterKind : std::uint8_t { Linear = 0, Mlp = 1 };

struct AdapterSpec {
  AdapterKind kind = AdapterKind::Mlp;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;  // mlp only; defaults to output_dim when 0
  std::size_t output_dim = 0;

  std::size_t param_count() const;
  AdapterSpec resolved() const;  // fills defaulted dims
};

// Trainable head mapping frozen base features to touched-up features.
// Parameter layout (doubles, flat):
//   linear: W (out x in, row-major), b (out)
//   mlp:    W1 (hidden x in), b1 (hidden), W2 (out x hidden), b2 (out)
// The mlp hidden layer uses a rectifier.
class Adapter {
 public:
  Adapter() = default;
  Adapter(AdapterSpec spec, std::vector<double> params);

  // Kaiming-uniform fan-in weights, zero biases.
  static Adapter random_init(const AdapterSpec& spec, Rng& rng);

  const AdapterSpec& spec() const noexcept { return spec_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<double> params() noexcept { return params_; }

  // y = f(x). scratch must hold hidden_dim doubles (unused for linear).
  void forward(std::span<const double> x, std::span<double> y,
               std::span<double> scratch) const;

  // Applies the head to every row; output rows are float32.
  FeatureMatrix transform(const FeatureMatrix& base, int threads = 1) const;

 private:
  AdapterSpec spec_;
  std::vector<double> params_;
};

// Checkpoint: magic "TUGA", u32 LE version, u8 kind, u64 LE input/hidden/
// output dims, then float32 LE parameters in the layout above.
void save_adapter(const Adapter& adapter, const std::filesystem::path& path);
Adapter load_adapter(const std::filesystem::path& path);

}  // namespace tug
