#pragma once

// Numerical primitives shared by every module: dense vector helpers,
// cosine similarity, temperature softmax and a batch PCA.

#include <cstddef>
#include <span>
#include <vector>

namespace prefvec {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Cosine similarity. Returns 0 when either vector has norm below 1e-12.
/// Throws ContractViolation on dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

/// a += scale * b
void axpy(double scale, std::span<const double> b, std::span<double> a);

Vector scaled(std::span<const double> a, double scale);
Vector add(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);
bool all_finite(std::span<const double> a);

/// Max-shifted softmax of scores / temperature.
Vector softmax(std::span<const double> scores, double temperature);

/// Principal component model: rows of `components` are orthonormal
/// directions in the input space, ordered by explained variance.
struct PcaModel {
  Vector mean;
  std::vector<Vector> components;

  std::size_t input_dim() const { return mean.size(); }
  std::size_t output_dim() const { return components.size(); }

  bool operator==(const PcaModel&) const = default;
};

/// Fits the top-k principal directions. Effective k is
/// min(k, dim, samples - 1). Each component is sign-fixed so that its
/// largest-magnitude entry is positive.
/// Throws FitUnavailable with fewer than two samples or zero total variance.
PcaModel pca_fit(std::span<const Vector> samples, std::size_t k);

/// components * (e - mean)
Vector pca_project(const PcaModel& model, std::span<const double> e);

}  // namespace prefvec
