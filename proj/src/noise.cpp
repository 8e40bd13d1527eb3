#include "equibench/noise.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "equibench/seed.hpp"

namespace equibench {

std::string_view to_string(NoiseKind kind) noexcept { return kind == NoiseKind::Msnr ? "msnr" : "ssnr"; }

void NoiseTarget::validate() const {
  if (!(ratio > 0.0) || !std::isfinite(ratio))
    throw Error(ErrorCode::InvalidArgument, "noise ratio must be positive and finite");
  if (kind == NoiseKind::Ssnr) {
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "ssnr tolerance must be positive");
    if (max_steps < 1) throw Error(ErrorCode::InvalidArgument, "ssnr max_steps must be >= 1");
  }
}

namespace {

// Removes from v its components along span{columns} (modified Gram-Schmidt,
// applied twice for stability). Near-dependent columns are dropped.
Vector residualize(VectorRef v, const std::vector<Vector>& columns) {
  std::vector<Vector> basis;
  for (const Vector& column : columns) {
    Vector q = column;
    const double scale = q.norm();
    if (!(scale > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& b : basis) q -= b.dot(q) * b;
    const double norm = q.norm();
    if (norm <= 1e-10 * scale) continue;
    basis.push_back(q / norm);
  }
  Vector r = v;
  for (int pass = 0; pass < 2; ++pass)
    for (const Vector& b : basis) r -= b.dot(r) * b;
  return r;
}

}  // namespace

NoisyModelPair make_msnr_equal_pair(Relation f1, Relation f2, VectorRef x, VectorRef eps, bool decorrelate) {
  if (x.size() != eps.size()) throw Error(ErrorCode::InvalidArgument, "x and eps differ in length");
  if (x.size() < 3) throw Error(ErrorCode::InvalidArgument, "noisy-equal pair needs at least 3 points");

  NoisyModelPair pair;
  pair.x = x;
  const Vector s1 = eval_relation(f1, x);
  const Vector s2 = eval_relation(f2, x);
  const double var1 = sample_variance(s1);
  const double var2 = sample_variance(s2);
  if (!(var2 > 0.0)) throw Error(ErrorCode::DegenerateSignal, "f2(x) has zero variance");
  if (!(var1 > 0.0)) throw Error(ErrorCode::DegenerateSignal, "f1(x) has zero variance");

  pair.noise1 = decorrelate ? residualize(eps, {Vector::Ones(x.size()), s1, s2}) : Vector(eps);
  pair.scale_a = std::sqrt(var1 / var2);
  pair.noise2 = pair.noise1 / pair.scale_a;
  pair.y1 = s1 + pair.noise1;
  pair.y2 = s2 + pair.noise2;
  pair.achieved_ratio_1 = msnr(pair.y1, pair.noise1);
  pair.achieved_ratio_2 = msnr(pair.y2, pair.noise2);
  return pair;
}

double msnr_to_r2(double msnr_value, R2Form form) {
  if (std::isinf(msnr_value) && msnr_value > 0) return 1.0;
  if (form == R2Form::Printed) {
    if (!(msnr_value > 0.0)) throw Error(ErrorCode::OutOfRange, "msnr must be positive");
    return 1.0 / std::sqrt(1.0 + 1.0 / msnr_value);
  }
  if (!(msnr_value > 1.0))
    throw Error(ErrorCode::OutOfRange, "msnr = var(y)/var(e) must exceed 1 for independent noise");
  return 1.0 - 1.0 / msnr_value;
}

HeuristicNoise heuristic_ssnr_noise(VectorRef signal, double target, int max_steps, double tolerance,
                                    std::uint64_t seed, SsnrObjective objective) {
  if (!(target > 0.0)) throw Error(ErrorCode::InvalidArgument, "ssnr target must be positive");
  if (max_steps < 1) throw Error(ErrorCode::InvalidArgument, "max_steps must be >= 1");
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  const double signal_power = signal.squaredNorm();
  if (!(signal_power > 0.0)) throw Error(ErrorCode::DegenerateSignal, "signal is identically zero");

  const Index n = signal.size();
  const bool noisy = objective == SsnrObjective::NoisySignal;
  const double noise_power = signal_power / (noisy && target > 1.0 ? target - 1.0 : target);
  const double per_point = noise_power / static_cast<double>(n);
  const double an = std::sqrt(per_point);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mean_dist(-an, an);

  HeuristicNoise best;
  best.noise = Vector::Zero(n);
  double best_delta = std::numeric_limits<double>::infinity();
  Vector draw(n);
  for (int step = 1; step <= max_steps; ++step) {
    const double mean_noise = mean_dist(rng);
    const double sd_noise = std::sqrt(std::max(0.0, per_point - mean_noise * mean_noise));
    if (sd_noise > 0.0) {
      std::normal_distribution<double> normal(mean_noise, sd_noise);
      for (Index i = 0; i < n; ++i) draw[i] = normal(rng);
    } else {
      draw.setConstant(mean_noise);
    }
    const double power = draw.squaredNorm();
    const double numerator = noisy ? (signal + draw).squaredNorm() : signal_power;
    const double achieved = power > 0.0 ? numerator / power : std::numeric_limits<double>::infinity();
    const double delta = std::abs(achieved - target);
    if (delta <= best_delta) {
      best_delta = delta;
      best.noise = draw;
      best.achieved = achieved;
    }
    best.best_delta.push_back(best_delta);
    best.steps = step;
    if (delta <= tolerance) break;
  }
  return best;
}

Vector exact_ssnr_adjust(VectorRef signal, VectorRef noise, double target) {
  const Index n = signal.size();
  if (noise.size() != n) throw Error(ErrorCode::InvalidArgument, "signal and noise differ in length");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "exact ssnr adjustment needs length >= 2");
  if (!(target > 0.0)) throw Error(ErrorCode::InvalidArgument, "ssnr target must be positive");

  const auto head_signal = signal.head(n - 1);
  const auto head_noise = noise.head(n - 1);
  const double fixed_noise_power = head_noise.squaredNorm();
  const double fixed_output_power = (head_signal + head_noise).squaredNorm();
  const double f = signal[n - 1];

  const double a = target - 1.0;
  const double b = -2.0 * f;
  const double c = target * fixed_noise_power - fixed_output_power - f * f;

  double root;
  if (a == 0.0) {
    if (b == 0.0) throw Error(ErrorCode::NoRealRoot, "degenerate linear equation for the last noise component");
    root = -c / b;
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) throw Error(ErrorCode::NoRealRoot, "negative discriminant for the last noise component");
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double r1 = q / a;
    root = r1;
    if (q != 0.0) {
      const double r2 = c / q;
      if (std::abs(r2) < std::abs(r1)) root = r2;
    }
  }
  Vector adjusted = noise;
  adjusted[n - 1] = root;
  if (!(adjusted.squaredNorm() > 0.0)) throw Error(ErrorCode::NoRealRoot, "adjusted noise is identically zero");
  return adjusted;
}

Vector standard_normal(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(n);
  for (Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

NoisyDataset make_noisy(Relation relation, VectorRef x, VectorRef standard_noise, const NoiseTarget& target,
                        std::uint64_t seed, int max_attempts) {
  target.validate();
  NoisyDataset data;
  data.relation = relation;
  data.target = target;
  data.x = x;
  data.signal = eval_relation(relation, x);
  data.seed = seed;

  if (target.kind == NoiseKind::Msnr) {
    if (!(target.ratio > 1.0))
      throw Error(ErrorCode::OutOfRange, "msnr target must exceed 1 (var(y) >= var(e) for independent noise)");
    if (standard_noise.size() != x.size()) throw Error(ErrorCode::InvalidArgument, "noise and x differ in length");
    const double scale = std::sqrt(kUniformVariance / (target.ratio - 1.0));
    const Vector eps = scale * standard_noise;
    NoisyModelPair pair = make_msnr_equal_pair(Relation::Line, relation, x, eps);
    data.noise = std::move(pair.noise2);
    data.y = std::move(pair.y2);
    data.achieved_ratio = pair.achieved_ratio_2;
    return data;
  }

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const HeuristicNoise guess = heuristic_ssnr_noise(data.signal, target.ratio, target.max_steps, target.tolerance,
                                                      derive_seed(seed, "ssnr-heuristic", attempt),
                                                      SsnrObjective::NoisySignal);
    try {
      data.noise = exact_ssnr_adjust(data.signal, guess.noise, target.ratio);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoRealRoot) continue;
      throw;
    }
    data.y = data.signal + data.noise;
    data.achieved_ratio = ssnr(data.y, data.noise);
    return data;
  }
  throw Error(ErrorCode::NoRealRoot, "no exact ssnr solution after retries");
}

NoisyDataset generate_dataset(Relation relation, Index n, const NoiseTarget& target, std::uint64_t seed) {
  const Vector x = sample_x(n, derive_seed(seed, "x"));
  const Vector z = standard_normal(n, derive_seed(seed, "noise"));
  return make_noisy(relation, x, z, target, seed);
}

}  // namespace equibench
