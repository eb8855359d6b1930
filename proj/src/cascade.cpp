#include "imf/cascade.hpp"

#include <algorithm>
#include <complex>
#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "imf/error.hpp"

namespace imf {

namespace {

constexpr double kNegativeEigenTol = 1e-8;

Eigen::Index next_pow2(Eigen::Index n) {
  Eigen::Index m = 1;
  while (m < n) m <<= 1;
  return m;
}

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::InvalidArgument, "must be positive and finite", field);
  }
}

}  // namespace

namespace detail {

// Stationary Gaussian field on n grid points with covariance
// sigma2 * cone_measure(T, l, k * step), sampled by circulant embedding, or
// by a dense Cholesky factor when the embedding is not nonnegative definite.
class GaussianFieldSampler {
public:
  GaussianFieldSampler(const CascadeParams& params, const CascadeOptions& options)
      : n_(params.cells()) {
    const double T = params.integral_scale;
    const double l = params.cutoff();
    const double step = params.grid_step;
    auto cov = [&](Eigen::Index k) {
      return params.sigma2 * cone_measure(T, l, static_cast<double>(k) * step);
    };

    if (!options.force_dense) {
      m_ = next_pow2(2 * n_);
      std::vector<std::complex<double>> row(static_cast<std::size_t>(m_));
      for (Eigen::Index k = 0; k <= m_ / 2; ++k) {
        row[k] = cov(k);
        if (k > 0 && k < m_ / 2) row[m_ - k] = row[k];
      }
      std::vector<std::complex<double>> eig;
      Eigen::FFT<double> fft;
      fft.fwd(eig, row);
      sqrt_eig_.resize(m_);
      bool embeds = true;
      for (Eigen::Index j = 0; j < m_; ++j) {
        double lam = eig[j].real();
        if (lam < -kNegativeEigenTol) {
          embeds = false;
          break;
        }
        sqrt_eig_[j] = std::sqrt(std::max(lam, 0.0) / static_cast<double>(m_));
      }
      if (embeds) return;
      sqrt_eig_.resize(0);
    }

    if (n_ > options.max_dense_size) {
      fail(ErrorCode::EmbeddingFailure,
           "circulant embedding is not nonnegative definite and the grid (" + std::to_string(n_) +
               " points) exceeds the dense fallback limit");
    }
    Eigen::MatrixXd c(n_, n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        c(i, j) = c(j, i) = cov(i - j);
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) {
      fail(ErrorCode::EmbeddingFailure, "covariance matrix is not positive definite");
    }
    factor_ = llt.matrixL();
  }

  Eigen::VectorXd sample(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    if (sqrt_eig_.size() > 0) {
      std::vector<std::complex<double>> w(static_cast<std::size_t>(m_));
      for (Eigen::Index j = 0; j < m_; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        w[j] = sqrt_eig_[j] * std::complex<double>(re, im);
      }
      std::vector<std::complex<double>> out;
      Eigen::FFT<double> fft;
      fft.fwd(out, w);
      Eigen::VectorXd field(n_);
      for (Eigen::Index i = 0; i < n_; ++i) field[i] = out[i].real();
      return field;
    }
    Eigen::VectorXd xi(n_);
    for (Eigen::Index i = 0; i < n_; ++i) xi[i] = normal(rng);
    return factor_ * xi;
  }

  bool uses_embedding() const noexcept { return sqrt_eig_.size() > 0; }

private:
  Eigen::Index n_;
  Eigen::Index m_ = 0;
  Eigen::VectorXd sqrt_eig_;
  Eigen::MatrixXd factor_;
};

}  // namespace detail

namespace {

Eigen::VectorXd compound_poisson_field(const CascadeParams& params, Rng& rng,
                                       const CascadeOptions& options) {
  const Eigen::Index n = params.cells();
  const double T = params.integral_scale;
  const double l = params.cutoff();
  const double step = params.grid_step;
  const double L = static_cast<double>(n) * step;
  const double mean = drift(params) * cone_measure(T, l, 0.0);

  Eigen::VectorXd field = Eigen::VectorXd::Constant(n, mean);
  if (params.cp_intensity == 0.0) return field;

  const double expected = params.cp_intensity * (L + T) / l;
  if (expected > options.max_expected_points) {
    fail(ErrorCode::IntensityOverflow, "expected point count " + std::to_string(expected) +
                                           " exceeds cap " +
                                           std::to_string(options.max_expected_points));
  }
  std::poisson_distribution<std::int64_t> count_dist(expected);
  const std::int64_t count = count_dist(rng);

  // Each point (u, v) adds its mark to every t_i with u - f(v)/2 <= t_i < u + f(v)/2.
  Eigen::VectorXd diff = Eigen::VectorXd::Zero(n + 1);
  for (std::int64_t p = 0; p < count; ++p) {
    const double u = -0.5 * T + (L + T) * uniform_open(rng);
    const double v = l / uniform_open(rng);
    const double mark = params.cp_marks.draw(rng);
    const double half = 0.5 * std::min(v, T);
    const double lo = std::ceil((u - half) / step);
    const double hi = std::ceil((u + half) / step);
    const auto first = static_cast<Eigen::Index>(std::clamp(lo, 0.0, static_cast<double>(n)));
    const auto last = static_cast<Eigen::Index>(std::clamp(hi, 0.0, static_cast<double>(n)));
    if (first >= last) continue;
    diff[first] += mark;
    diff[last] -= mark;
  }
  double running = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    running += diff[i];
    field[i] += running;
  }
  return field;
}

}  // namespace

double MarkLaw::moment_threshold() const noexcept {
  if (const auto* e = std::get_if<Exponential>(&law)) return e->rate;
  return std::numeric_limits<double>::infinity();
}

double MarkLaw::moment(double theta) const {
  if (theta >= moment_threshold()) {
    fail(ErrorCode::MomentDiverges,
         "E W^" + std::to_string(theta) + " is infinite (threshold " +
             std::to_string(moment_threshold()) + ")");
  }
  if (const auto* pm = std::get_if<PointMasses>(&law)) {
    double m = 0.0;
    for (std::size_t i = 0; i < pm->values.size(); ++i) {
      m += pm->probabilities[i] * std::exp(theta * pm->values[i]);
    }
    return m;
  }
  if (const auto* nm = std::get_if<Normal>(&law)) {
    return std::exp(theta * nm->mean + 0.5 * theta * theta * nm->sd * nm->sd);
  }
  const auto& ex = std::get<Exponential>(law);
  return ex.rate / (ex.rate - theta);
}

double MarkLaw::draw(Rng& rng) const {
  if (const auto* pm = std::get_if<PointMasses>(&law)) {
    if (pm->values.size() == 1) return pm->values[0];
    std::discrete_distribution<std::size_t> pick(pm->probabilities.begin(),
                                                 pm->probabilities.end());
    return pm->values[pick(rng)];
  }
  if (const auto* nm = std::get_if<Normal>(&law)) {
    std::normal_distribution<double> normal(nm->mean, nm->sd);
    return normal(rng);
  }
  std::exponential_distribution<double> expo(std::get<Exponential>(law).rate);
  return expo(rng);
}

void MarkLaw::validate() const {
  if (const auto* pm = std::get_if<PointMasses>(&law)) {
    if (pm->values.empty() || pm->values.size() != pm->probabilities.size()) {
      fail(ErrorCode::InvalidArgument, "point-mass marks need matching values/probabilities",
           "cp_marks");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < pm->values.size(); ++i) {
      const double p = pm->probabilities[i];
      if (!(p >= 0.0 && p <= 1.0) || !std::isfinite(pm->values[i])) {
        fail(ErrorCode::InvalidArgument, "invalid mark value or probability", "cp_marks");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      fail(ErrorCode::InvalidArgument, "mark probabilities must sum to 1", "cp_marks");
    }
  } else if (const auto* nm = std::get_if<Normal>(&law)) {
    if (!(nm->sd >= 0.0) || !std::isfinite(nm->mean) || !std::isfinite(nm->sd)) {
      fail(ErrorCode::InvalidArgument, "normal marks need finite mean and sd >= 0", "cp_marks");
    }
  } else {
    if (!(std::get<Exponential>(law).rate > 0.0)) {
      fail(ErrorCode::InvalidArgument, "exponential marks need a positive rate", "cp_marks");
    }
  }
}

Eigen::Index CascadeParams::cells() const noexcept {
  return static_cast<Eigen::Index>(std::llround(length / grid_step));
}

void validate(const CascadeParams& params) {
  require_positive(params.integral_scale, "integral_scale");
  require_positive(params.grid_step, "grid_step");
  require_positive(params.length, "length");
  if (params.truncation) require_positive(*params.truncation, "truncation");
  if (!(params.cutoff() < params.integral_scale)) {
    fail(ErrorCode::InvalidCutoffs, "truncation must be below integral_scale", "truncation");
  }
  if (params.cells() < 1) {
    fail(ErrorCode::InvalidArgument, "length must cover at least one grid step", "length");
  }
  if (params.kind == CascadeKind::LogNormal) {
    if (!(params.sigma2 >= 0.0) || !std::isfinite(params.sigma2)) {
      fail(ErrorCode::InvalidArgument, "must be nonnegative and finite", "sigma2");
    }
  } else {
    if (!(params.cp_intensity >= 0.0) || !std::isfinite(params.cp_intensity)) {
      fail(ErrorCode::InvalidArgument, "must be nonnegative and finite", "cp_intensity");
    }
    params.cp_marks.validate();
    if (!(params.cp_marks.moment_threshold() > 1.0)) {
      fail(ErrorCode::MomentDiverges, "E W must be finite (moment threshold must exceed 1)",
           "cp_marks");
    }
  }
}

double drift(const CascadeParams& params) {
  if (params.kind == CascadeKind::LogNormal) return -0.5 * params.sigma2;
  return -params.cp_intensity * (params.cp_marks.moment(1.0) - 1.0);
}

double laplace_exponent(const CascadeParams& params, double theta) {
  const double m = drift(params);
  if (params.kind == CascadeKind::LogNormal) {
    return m * theta + 0.5 * params.sigma2 * theta * theta;
  }
  return m * theta + params.cp_intensity * (params.cp_marks.moment(theta) - 1.0);
}

double scaling_function(const CascadeParams& params, double q) {
  return q - laplace_exponent(params, q);
}

CascadeSimulator::CascadeSimulator(CascadeParams params, CascadeOptions options)
    : params_(std::move(params)), options_(options) {
  validate(params_);
  if (params_.kind == CascadeKind::LogNormal && params_.sigma2 > 0.0) {
    gaussian_ = std::make_shared<const detail::GaussianFieldSampler>(params_, options_);
  }
}

bool CascadeSimulator::uses_embedding() const noexcept {
  return !gaussian_ || gaussian_->uses_embedding();
}

Eigen::VectorXd CascadeSimulator::log_field(Rng& rng) const {
  if (params_.kind == CascadeKind::LogCompoundPoisson) {
    return compound_poisson_field(params_, rng, options_);
  }
  const Eigen::Index n = params_.cells();
  if (!gaussian_) return Eigen::VectorXd::Zero(n);
  const double mean = drift(params_) * cone_measure(params_.integral_scale, params_.cutoff(), 0.0);
  return gaussian_->sample(rng).array() + mean;
}

SamplePath CascadeSimulator::path(Rng& rng) const {
  SamplePath out = integrate_field(log_field(rng), params_.grid_step);
  out.meta = params_.kind == CascadeKind::LogNormal ? "lognormal cascade" : "log-CP cascade";
  return out;
}

Eigen::VectorXd simulate_log_field(const CascadeParams& params, Rng& rng,
                                   const CascadeOptions& options) {
  return CascadeSimulator(params, options).log_field(rng);
}

SamplePath integrate_field(const Eigen::VectorXd& field, double grid_step) {
  const Eigen::Index n = field.size();
  SamplePath path{uniform_grid(n, grid_step), Eigen::VectorXd(n + 1), {}};
  double running = 0.0;
  path.values[0] = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    running += std::exp(field[i]);
    path.values[i + 1] = running * grid_step;
  }
  return path;
}

SamplePath simulate_cascade(const CascadeParams& params, Rng& rng,
                            const CascadeOptions& options) {
  return CascadeSimulator(params, options).path(rng);
}

}  // namespace imf
