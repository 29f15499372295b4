#include "prefvec/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "prefvec/errors.hpp"

namespace prefvec {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw ContractViolation(std::string(op) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "cosine");
  const double aa = dot(a, a);
  const double bb = dot(b, b);
  if (std::sqrt(aa) < 1e-12 || std::sqrt(bb) < 1e-12) return 0.0;
  // sqrt(aa * bb) rather than sqrt(aa) * sqrt(bb): cosine(a, a) is then exactly 1.
  const double c = dot(a, b) / std::sqrt(aa * bb);
  return std::clamp(c, -1.0, 1.0);
}

void axpy(double scale, std::span<const double> b, std::span<double> a) {
  require_same_dim(a.size(), b.size(), "axpy");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += scale * b[i];
}

Vector scaled(std::span<const double> a, double scale) {
  Vector out(a.begin(), a.end());
  for (double& x : out) x *= scale;
  return out;
}

Vector add(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "add");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vector sub(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size(), "sub");
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

bool all_finite(std::span<const double> a) {
  return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

Vector softmax(std::span<const double> scores, double temperature) {
  if (scores.empty()) throw ContractViolation("softmax: empty score list");
  if (!(temperature > 0.0)) throw ContractViolation("softmax: temperature must be > 0");

  Vector out(scores.size());
  double m = -INFINITY;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = scores[i] / temperature;
    m = std::max(m, out[i]);
  }
  double z = 0.0;
  for (double& x : out) {
    x = std::exp(x - m);
    z += x;
  }
  for (double& x : out) x /= z;
  return out;
}

PcaModel pca_fit(std::span<const Vector> samples, std::size_t k) {
  if (samples.size() < 2) throw FitUnavailable("pca_fit: need at least two samples");
  const std::size_t d = samples.front().size();
  if (d == 0) throw ContractViolation("pca_fit: zero-dimensional samples");
  for (const auto& s : samples) require_same_dim(s.size(), d, "pca_fit");
  if (k == 0) throw ContractViolation("pca_fit: k must be positive");

  const std::size_t n = samples.size();
  const std::size_t k_eff = std::min({k, d, n - 1});

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (const auto& s : samples) mean += Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
  mean /= static_cast<double>(n);

  Eigen::MatrixXd centered(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    centered.row(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::VectorXd>(samples[i].data(), d).transpose() - mean.transpose();
  }
  if (centered.squaredNorm() == 0.0) throw FitUnavailable("pca_fit: samples have zero variance");

  // Right singular vectors of the centered data are the covariance eigenvectors,
  // already sorted by decreasing singular value.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::MatrixXd& v = svd.matrixV();

  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + d);
  model.components.reserve(k_eff);
  for (std::size_t c = 0; c < k_eff; ++c) {
    Vector row(d);
    std::size_t arg = 0;
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = v(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
      if (std::abs(row[j]) > std::abs(row[arg])) arg = j;
    }
    if (row[arg] < 0.0) {
      for (double& x : row) x = -x;
    }
    model.components.push_back(std::move(row));
  }
  return model;
}

Vector pca_project(const PcaModel& model, std::span<const double> e) {
  require_same_dim(e.size(), model.input_dim(), "pca_project");
  const Vector centered = sub(e, model.mean);
  Vector out(model.output_dim());
  for (std::size_t c = 0; c < model.output_dim(); ++c) out[c] = dot(model.components[c], centered);
  return out;
}

}  // namespace prefvec
