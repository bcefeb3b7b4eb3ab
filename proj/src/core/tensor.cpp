#include "tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spa {

int64_t volume(const std::vector<int64_t>& extents) {
  int64_t n = 1;
  for (int64_t e : extents) {
    if (e < 0) throw std::invalid_argument("tensor extent must be non-negative, got " + std::to_string(e));
    n *= e;
  }
  return n;
}

std::string shape_str(const std::vector<int64_t>& extents) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < extents.size(); ++i) {
    if (i) os << "x";
    os << extents[i];
  }
  os << "]";
  return os.str();
}

Tensor::Tensor(std::vector<int64_t> extents)
    : shape(std::move(extents)), data(static_cast<size_t>(volume(shape)), 0.0) {}

Tensor::Tensor(std::vector<int64_t> extents, std::vector<double> values)
    : shape(std::move(extents)), data(std::move(values)) {
  if (volume(shape) != static_cast<int64_t>(data.size())) {
    throw std::invalid_argument("tensor data length " + std::to_string(data.size()) +
                                " does not match shape " + shape_str(shape));
  }
}

namespace {
void check_rank(const Tensor& t, int64_t want) {
  if (t.rank() != want) {
    throw std::invalid_argument("expected rank-" + std::to_string(want) + " tensor, got shape " +
                                shape_str(t.shape));
  }
}
}  // namespace

double& Tensor::at(int64_t i) {
  check_rank(*this, 1);
  return data[static_cast<size_t>(i)];
}
double Tensor::at(int64_t i) const { return const_cast<Tensor*>(this)->at(i); }

double& Tensor::at(int64_t i, int64_t j) {
  check_rank(*this, 2);
  return data[static_cast<size_t>(i * shape[1] + j)];
}
double Tensor::at(int64_t i, int64_t j) const { return const_cast<Tensor*>(this)->at(i, j); }

double& Tensor::at(int64_t c, int64_t i, int64_t j) {
  check_rank(*this, 3);
  return data[static_cast<size_t>((c * shape[1] + i) * shape[2] + j)];
}
double Tensor::at(int64_t c, int64_t i, int64_t j) const {
  return const_cast<Tensor*>(this)->at(c, i, j);
}

void Tensor::fill(double v) {
  for (double& x : data) x = v;
}

Tensor zeros_like(const Tensor& t) { return Tensor(t.shape); }

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape != b.shape) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a.shape) +
                                " vs " + shape_str(b.shape));
  }
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  Tensor out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b.data[i];
  return out;
}

Tensor scale(const Tensor& a, double s) {
  Tensor out = a;
  for (double& x : out.data) x *= s;
  return out;
}

void add_in_place(Tensor& dst, const Tensor& src) {
  require_same_shape(dst, src, "add_in_place");
  for (size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += src.data[i];
}

void axpy_in_place(Tensor& dst, double alpha, const Tensor& src) {
  require_same_shape(dst, src, "axpy_in_place");
  for (size_t i = 0; i < dst.data.size(); ++i) dst.data[i] += alpha * src.data[i];
}

double dot(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "dot");
  double s = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) s += a.data[i] * b.data[i];
  return s;
}

double sum_squares(const Tensor& t) {
  double s = 0.0;
  for (double x : t.data) s += x * x;
  return s;
}

double max_abs(const Tensor& t) {
  double m = 0.0;
  for (double x : t.data) m = std::max(m, std::fabs(x));
  return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}

bool all_finite(const Tensor& t) {
  for (double x : t.data) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace spa
