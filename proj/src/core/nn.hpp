#pragma once

#include <utility>
#include <vector>

#include "tensor.hpp"

namespace spa {

// 2-D convolution parameters. weights is outC x inC x kH x kW, bias is outC.
// Zero padding; output extent (in + 2*padding - k) / stride + 1 must divide
// exactly. Orientation is cross-correlation (no kernel flip).
struct ConvParams {
  Tensor weights;
  Tensor bias;
  int64_t stride = 1;
  int64_t padding = 0;
};

// Affine map: weights is out x in, bias is out.
struct DenseParams {
  Tensor weights;
  Tensor bias;
};

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                      int64_t stride, int64_t padding);

struct ConvGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};
ConvGrads conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                          int64_t stride, int64_t padding, const Tensor& grad_out);

inline Tensor conv2d_forward(const Tensor& input, const ConvParams& p) {
  return conv2d_forward(input, p.weights, p.bias, p.stride, p.padding);
}
inline ConvGrads conv2d_backward(const Tensor& input, const ConvParams& p, const Tensor& grad_out) {
  return conv2d_backward(input, p.weights, p.bias, p.stride, p.padding, grad_out);
}

Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias);

struct DenseGrads {
  Tensor input;
  Tensor weights;
  Tensor bias;
};
DenseGrads dense_backward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                          const Tensor& grad_out);

inline Tensor dense_forward(const Tensor& input, const DenseParams& p) {
  return dense_forward(input, p.weights, p.bias);
}
inline DenseGrads dense_backward(const Tensor& input, const DenseParams& p, const Tensor& grad_out) {
  return dense_backward(input, p.weights, p.bias, grad_out);
}

Tensor relu(const Tensor& x);
// Subgradient 0 at the kink: positions with x <= 0 pass nothing.
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

Tensor sigmoid(const Tensor& x);
// Takes the forward output y = sigmoid(x); dy/dx = y * (1 - y).
Tensor sigmoid_backward(const Tensor& y, const Tensor& grad_out);

// C x H x W -> C x 1 x 1 per-channel mean.
Tensor global_average_pool(const Tensor& x);
Tensor global_average_pool_backward(const std::vector<int64_t>& input_shape,
                                    const Tensor& grad_out);

// Stacks b's channels after a's; spatial extents must match.
Tensor concat_channels(const Tensor& a, const Tensor& b);
Tensor concat_channels(const std::vector<const Tensor*>& parts);
// Inverse of the two-argument concat: first ca channels, then the rest.
std::pair<Tensor, Tensor> split_channels(const Tensor& x, int64_t ca);
std::vector<Tensor> split_channels(const Tensor& x, const std::vector<int64_t>& channel_counts);

}  // namespace spa
