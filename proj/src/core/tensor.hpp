#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace spa {

// Dense row-major tensor of doubles. The canonical image/feature layout is
// channels x height x width; a batch extent may be prepended. Extents of zero
// are structurally legal (empty tensor) so that edge cases like concatenating
// a zero-channel tensor stay expressible; operations that need data reject
// empty inputs themselves.
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int64_t> extents);
  Tensor(std::vector<int64_t> extents, std::vector<double> values);

  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  int64_t rank() const { return static_cast<int64_t>(shape.size()); }
  int64_t size() const { return static_cast<int64_t>(data.size()); }
  int64_t extent(int64_t axis) const { return shape[static_cast<size_t>(axis)]; }
  bool empty() const { return data.empty(); }

  double* ptr() { return data.data(); }
  const double* ptr() const { return data.data(); }

  // Rank-checked element access; kernels use raw offsets instead.
  double& at(int64_t i);
  double at(int64_t i) const;
  double& at(int64_t i, int64_t j);
  double at(int64_t i, int64_t j) const;
  double& at(int64_t c, int64_t i, int64_t j);
  double at(int64_t c, int64_t i, int64_t j) const;

  void fill(double v);
  bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

int64_t volume(const std::vector<int64_t>& extents);
std::string shape_str(const std::vector<int64_t>& extents);

Tensor zeros_like(const Tensor& t);

// Elementwise helpers shared by the layer implementations.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double s);
void add_in_place(Tensor& dst, const Tensor& src);   // dst += src
void axpy_in_place(Tensor& dst, double alpha, const Tensor& src);

double dot(const Tensor& a, const Tensor& b);
double sum_squares(const Tensor& t);
double max_abs(const Tensor& t);
double max_abs_diff(const Tensor& a, const Tensor& b);
bool all_finite(const Tensor& t);

// Throws std::invalid_argument when the shapes differ, naming both.
void require_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace spa
