#include "equibench/measures.hpp"

#include <charconv>
#include <mutex>
#include <sstream>
#include <utility>

#include "equibench/error.hpp"
#include "equibench/stats.hpp"

namespace equibench {
namespace {

constexpr std::array<std::pair<MeasureKind, std::string_view>, 12> kNames{{
    {MeasureKind::Pcor, "pcor"},
    {MeasureKind::Scor, "scor"},
    {MeasureKind::Kcor, "kcor"},
    {MeasureKind::Dcor, "dcor"},
    {MeasureKind::Hsic, "hsic"},
    {MeasureKind::Mi, "mi"},
    {MeasureKind::Mic, "mic"},
    {MeasureKind::Rdc, "rdc"},
    {MeasureKind::Ace, "ace"},
    {MeasureKind::Hhg, "hhg"},
    {MeasureKind::Cdc, "cdc"},
    {MeasureKind::CurveCor, "curvecor"},
}};

std::mutex plugin_mutex;
MeasurePlugin cdc_plugin;
MeasurePlugin curvecor_plugin;

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorCode::InvalidArgument, "bad value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

bool parse_flag(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw Error(ErrorCode::InvalidArgument, "bad boolean '" + std::string(text) + "' for " + std::string(key));
}

std::string format_number(double v) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, ptr);
}

MeasurePlugin plugin_for(MeasureKind kind) {
  std::lock_guard lock(plugin_mutex);
  return kind == MeasureKind::Cdc ? cdc_plugin : curvecor_plugin;
}

}  // namespace

std::string_view to_string(MeasureKind kind) noexcept {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<MeasureKind> parse_measure(std::string_view name) noexcept {
  for (const auto& [k, text] : kNames)
    if (text == name) return k;
  return std::nullopt;
}

void MeasureParams::set(std::string_view key, std::string_view value) {
  if (key == "mi.k") mi_k = parse_number<int>(key, value);
  else if (key == "mi.normalized") mi_normalized = parse_flag(key, value);
  else if (key == "mic.alpha" || key == "mic.alpha_exponent") mic_alpha = parse_number<double>(key, value);
  else if (key == "mic.clumps") mic_clumps = parse_number<int>(key, value);
  else if (key == "rdc.k") rdc_k = parse_number<int>(key, value);
  else if (key == "rdc.s") rdc_s = parse_number<double>(key, value);
  else if (key == "ace.max_iter") ace_max_iter = parse_number<int>(key, value);
  else if (key == "ace.tol") ace_tol = parse_number<double>(key, value);
  else if (key == "hhg.cap") hhg_cap = parse_number<Index>(key, value);
  else throw Error(ErrorCode::InvalidArgument, "unknown measure parameter '" + std::string(key) + "'");
  const auto require = [&](bool ok, const char* rule) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, std::string(key) + " " + rule + ", got '" + std::string(value) + "'");
  };
  require(mi_k >= 1, "must be at least 1");
  require(mic_alpha > 0.0 && mic_alpha <= 1.0, "must lie in (0, 1]");
  require(mic_clumps >= 1, "must be at least 1");
  require(rdc_k >= 1, "must be at least 1");
  require(rdc_s > 0.0, "must be positive");
  require(ace_max_iter >= 1, "must be at least 1");
  require(ace_tol > 0.0, "must be positive");
  require(hhg_cap >= 4, "must be at least 4");
}

std::string MeasureParams::describe(MeasureKind kind) const {
  std::ostringstream out;
  switch (kind) {
    case MeasureKind::Mi: out << "k=" << mi_k << ";normalized=" << (mi_normalized ? 1 : 0); break;
    case MeasureKind::Mic: out << "alpha=" << format_number(mic_alpha) << ";clumps=" << mic_clumps; break;
    case MeasureKind::Rdc: out << "k=" << rdc_k << ";s=" << format_number(rdc_s); break;
    case MeasureKind::Ace: out << "max_iter=" << ace_max_iter << ";tol=" << format_number(ace_tol); break;
    case MeasureKind::Hhg: out << "cap=" << hhg_cap; break;
    default: break;
  }
  return out.str();
}

double score(MeasureKind kind, VectorRef x, VectorRef y, const MeasureParams& params, std::uint64_t seed) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "x and y differ in length");
  switch (kind) {
    case MeasureKind::Pcor: return pearson(x, y);
    case MeasureKind::Scor: return spearman(x, y);
    case MeasureKind::Kcor: return kendall(x, y);
    case MeasureKind::Dcor: return distance_correlation(x, y);
    case MeasureKind::Hsic: return hsic(x, y);
    case MeasureKind::Mi:
      return params.mi_normalized ? normalized_mutual_information(x, y) : mutual_information(x, y, params.mi_k);
    case MeasureKind::Mic: return mic(x, y, params.mic_alpha, params.mic_clumps);
    case MeasureKind::Rdc: return rdc(x, y, params.rdc_k, params.rdc_s, seed);
    case MeasureKind::Ace: return ace(x, y, params.ace_max_iter, params.ace_tol).correlation;
    case MeasureKind::Hhg: return hhg(x, y, params.hhg_cap);
    case MeasureKind::Cdc:
    case MeasureKind::CurveCor: {
      const MeasurePlugin plugin = plugin_for(kind);
      if (!plugin)
        throw Error(ErrorCode::NotImplemented,
                    "measure slot '" + std::string(to_string(kind)) + "' has no installed implementation");
      return plugin(x, y, seed);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown measure");
}

MeasureScore score_measure(MeasureKind kind, VectorRef x, VectorRef y, const MeasureParams& params,
                           std::uint64_t seed) {
  return {kind, score(kind, x, y, params, seed), x.size(), params.describe(kind)};
}

void install_measure_plugin(MeasureKind slot, MeasurePlugin plugin) {
  std::lock_guard lock(plugin_mutex);
  if (slot == MeasureKind::Cdc) cdc_plugin = std::move(plugin);
  else if (slot == MeasureKind::CurveCor) curvecor_plugin = std::move(plugin);
  else throw Error(ErrorCode::InvalidArgument, "only the cdc and curvecor slots accept plugins");
}

namespace {

class GenericScorer final : public PermutationScorer {
 public:
  GenericScorer(MeasureKind kind, VectorRef x, VectorRef y, const MeasureParams& params, std::uint64_t seed)
      : kind_(kind), x_(x), y_(y), params_(params), seed_(seed) {}

  double operator()(std::span<const Index> perm) const override {
    Vector permuted(y_.size());
    for (Index i = 0; i < y_.size(); ++i) permuted[i] = y_[perm[static_cast<std::size_t>(i)]];
    return score(kind_, x_, permuted, params_, seed_);
  }

 private:
  MeasureKind kind_;
  Vector x_;
  Vector y_;
  MeasureParams params_;
  std::uint64_t seed_;
};

// Pearson on pre-standardised vectors: one gathered dot product per call.
class LinearScorer final : public PermutationScorer {
 public:
  LinearScorer(const Vector& x, const Vector& y) {
    if (x.size() != y.size() || x.size() < 2)
      throw Error(ErrorCode::InvalidArgument, "correlation needs two equal-length vectors of length >= 2");
    x_ = x.array() - x.mean();
    y_ = y.array() - y.mean();
    const double sxx = x_.squaredNorm(), syy = y_.squaredNorm();
    if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::DegenerateInput, "correlation input has zero variance");
    x_ /= std::sqrt(sxx);
    y_ /= std::sqrt(syy);
  }

  double operator()(std::span<const Index> perm) const override {
    double acc = 0.0;
    for (Index i = 0; i < x_.size(); ++i) acc += x_[i] * y_[perm[static_cast<std::size_t>(i)]];
    return std::clamp(acc, -1.0, 1.0);
  }

 private:
  Vector x_;
  Vector y_;
};

class HsicScorer final : public PermutationScorer {
 public:
  HsicScorer(VectorRef x, VectorRef y) : kernel_(x, y) {}
  double operator()(std::span<const Index> perm) const override { return kernel_(perm); }

 private:
  HsicPermutationKernel kernel_;
};

class HhgScorer final : public PermutationScorer {
 public:
  HhgScorer(VectorRef x, VectorRef y, Index cap) : kernel_(x, y, cap) {}
  double operator()(std::span<const Index> perm) const override { return kernel_(perm); }

 private:
  HhgKernel kernel_;
};

}  // namespace

std::unique_ptr<PermutationScorer> make_permutation_scorer(MeasureKind kind, VectorRef x, VectorRef y,
                                                           const MeasureParams& params, std::uint64_t seed) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "x and y differ in length");
  switch (kind) {
    case MeasureKind::Pcor: return std::make_unique<LinearScorer>(x, y);
    case MeasureKind::Scor: return std::make_unique<LinearScorer>(mid_ranks(x), mid_ranks(y));
    case MeasureKind::Hsic: return std::make_unique<HsicScorer>(x, y);
    case MeasureKind::Hhg: return std::make_unique<HhgScorer>(x, y, params.hhg_cap);
    default: return std::make_unique<GenericScorer>(kind, x, y, params, seed);
  }
}

}  // namespace equibench
