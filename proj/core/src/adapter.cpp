#include "tug/adapter.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "math_kernels.hpp"
#include "tug/error.hpp"
#include "tug/parallel.hpp"
#include "tug/version.hpp"

namespace tug {

AdapterSpec AdapterSpec::resolved() const {
  AdapterSpec s = *this;
  if (s.output_dim == 0) s.output_dim = s.input_dim;
  if (s.kind == AdapterKind::Mlp && s.hidden_dim == 0) {
    s.hidden_dim = s.output_dim;
  }
  if (s.kind == AdapterKind::Linear) s.hidden_dim = 0;
  return s;
}

std::size_t AdapterSpec::param_count() const {
  const AdapterSpec s = resolved();
  if (s.kind == AdapterKind::Linear) {
    return s.input_dim * s.output_dim + s.output_dim;
  }
  return s.input_dim * s.hidden_dim + s.hidden_dim +
         s.hidden_dim * s.output_dim + s.output_dim;
}

Adapter::Adapter(AdapterSpec spec, std::vector<double> params)
    : spec_(spec.resolved()), params_(std::move(params)) {
  if (spec_.input_dim == 0 || spec_.output_dim == 0) {
    throw ValidationError("adapter dims must be >= 1");
  }
  if (params_.size() != spec_.param_count()) {
    throw ValidationError("adapter parameter count mismatch: got " +
                          std::to_string(params_.size()) + ", expected " +
                          std::to_string(spec_.param_count()));
  }
}

Adapter Adapter::random_init(const AdapterSpec& spec, Rng& rng) {
  const AdapterSpec s = spec.resolved();
  std::vector<double> params(s.param_count(), 0.0);

  auto fill_kaiming = [&](std::size_t offset, std::size_t rows,
                          std::size_t fan_in) {
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < rows * fan_in; ++i) {
      params[offset + i] = rng.uniform(-bound, bound);
    }
  };

  if (s.kind == AdapterKind::Linear) {
    fill_kaiming(0, s.output_dim, s.input_dim);
  } else {
    fill_kaiming(0, s.hidden_dim, s.input_dim);
    fill_kaiming(s.hidden_dim * s.input_dim + s.hidden_dim, s.output_dim,
                 s.hidden_dim);
  }
  return Adapter(s, std::move(params));
}

void Adapter::forward(std::span<const double> x, std::span<double> y,
                      std::span<double> scratch) const {
  const auto& s = spec_;
  const double* p = params_.data();
  if (s.kind == AdapterKind::Linear) {
    kernels::linear_forward(x.data(), p, p + s.output_dim * s.input_dim,
                            y.data(), 1, s.input_dim, s.output_dim);
    return;
  }
  const double* w1 = p;
  const double* b1 = w1 + s.hidden_dim * s.input_dim;
  const double* w2 = b1 + s.hidden_dim;
  const double* b2 = w2 + s.output_dim * s.hidden_dim;
  kernels::linear_forward(x.data(), w1, b1, scratch.data(), 1, s.input_dim,
                          s.hidden_dim);
  kernels::relu_inplace(scratch.data(), s.hidden_dim);
  kernels::linear_forward(scratch.data(), w2, b2, y.data(), 1, s.hidden_dim,
                          s.output_dim);
}

FeatureMatrix Adapter::transform(const FeatureMatrix& base,
                                 int threads) const {
  if (base.dim() != spec_.input_dim) {
    throw ValidationError("adapter expects input dim " +
                          std::to_string(spec_.input_dim) + ", got " +
                          std::to_string(base.dim()));
  }
  FeatureMatrix out(base.rows(), spec_.output_dim);
  for_chunks(base.rows(), threads, 1024,
             [&](std::size_t, std::size_t b, std::size_t e) {
               std::vector<double> x(spec_.input_dim);
               std::vector<double> y(spec_.output_dim);
               std::vector<double> scratch(
                   spec_.kind == AdapterKind::Mlp ? spec_.hidden_dim : 0);
               for (std::size_t v = b; v < e; ++v) {
                 const auto row = base.row(v);
                 for (std::size_t k = 0; k < x.size(); ++k) x[k] = row[k];
                 forward(x, y, scratch);
                 auto dst = out.row(v);
                 for (std::size_t k = 0; k < y.size(); ++k) {
                   dst[k] = static_cast<float>(y[k]);
                 }
               }
             });
  for (float v : out.values()) {
    if (!std::isfinite(v)) {
      throw NumericError("adapter produced a non-finite feature value");
    }
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'T', 'U', 'G', 'A'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint i/o assumes a little-endian host");

template <class T>
void write_pod(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& in, const std::filesystem::path& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError("truncated checkpoint: " + path.string());
  return value;
}

}  // namespace

void save_adapter(const Adapter& adapter, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  const auto& s = adapter.spec();
  out.write(kMagic, 4);
  write_pod<std::uint32_t>(out, kTugaVersion);
  write_pod<std::uint8_t>(out, static_cast<std::uint8_t>(s.kind));
  write_pod<std::uint64_t>(out, s.input_dim);
  write_pod<std::uint64_t>(out, s.hidden_dim);
  write_pod<std::uint64_t>(out, s.output_dim);
  for (double p : adapter.params()) {
    write_pod<float>(out, static_cast<float>(p));
  }
  if (!out) throw IoError("write failure on " + path.string());
}

Adapter load_adapter(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("bad magic in " + path.string() + " (expected TUGA)");
  }
  const auto version = read_pod<std::uint32_t>(in, path);
  if (version != kTugaVersion) {
    throw FormatError("unsupported TUGA version " + std::to_string(version));
  }
  const auto kind_byte = read_pod<std::uint8_t>(in, path);
  if (kind_byte > 1) {
    throw FormatError("unknown adapter kind in " + path.string());
  }
  AdapterSpec spec;
  spec.kind = static_cast<AdapterKind>(kind_byte);
  spec.input_dim = static_cast<std::size_t>(read_pod<std::uint64_t>(in, path));
  spec.hidden_dim =
      static_cast<std::size_t>(read_pod<std::uint64_t>(in, path));
  spec.output_dim =
      static_cast<std::size_t>(read_pod<std::uint64_t>(in, path));

  std::vector<double> params(spec.param_count());
  for (double& p : params) {
    p = static_cast<double>(read_pod<float>(in, path));
  }
  return Adapter(spec, std::move(params));
}

}  // namespace tug
