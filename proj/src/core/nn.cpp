#include "nn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spa {

namespace {

void check_image(const Tensor& x, const char* op) {
  if (x.rank() != 3) {
    throw std::invalid_argument(std::string(op) + ": expected C x H x W input, got shape " +
                                shape_str(x.shape));
  }
}

// Copies one channel into a zero-padded H+2p x W+2p buffer.
void pad_channel(const double* src, int64_t h, int64_t w, int64_t p, double* dst) {
  const int64_t wp = w + 2 * p;
  for (int64_t i = 0; i < h; ++i) {
    double* row = dst + (i + p) * wp + p;
    const double* in = src + i * w;
    for (int64_t j = 0; j < w; ++j) row[j] = in[j];
  }
}

struct ConvDims {
  int64_t in_c, h, w, out_c, kh, kw, oh, ow, hp, wp;
};

ConvDims conv_dims(const Tensor& input, const Tensor& weights, const Tensor& bias,
                   int64_t stride, int64_t padding, const char* op) {
  check_image(input, op);
  if (weights.rank() != 4) {
    throw std::invalid_argument(std::string(op) + ": expected outC x inC x kH x kW weights, got " +
                                shape_str(weights.shape));
  }
  ConvDims d{};
  d.in_c = input.shape[0];
  d.h = input.shape[1];
  d.w = input.shape[2];
  d.out_c = weights.shape[0];
  d.kh = weights.shape[2];
  d.kw = weights.shape[3];
  if (weights.shape[1] != d.in_c) {
    throw std::invalid_argument(std::string(op) + ": input channels " + shape_str(input.shape) +
                                " do not match kernel " + shape_str(weights.shape));
  }
  if (bias.rank() != 1 || bias.shape[0] != d.out_c) {
    throw std::invalid_argument(std::string(op) + ": bias shape " + shape_str(bias.shape) +
                                " does not match " + std::to_string(d.out_c) + " output channels");
  }
  if (stride < 1 || padding < 0) {
    throw std::invalid_argument(std::string(op) + ": stride must be >= 1 and padding >= 0");
  }
  d.hp = d.h + 2 * padding;
  d.wp = d.w + 2 * padding;
  if (d.hp < d.kh || d.wp < d.kw) {
    throw std::invalid_argument(std::string(op) + ": padded input " + shape_str({d.in_c, d.hp, d.wp}) +
                                " smaller than kernel " + shape_str(weights.shape));
  }
  if ((d.hp - d.kh) % stride != 0 || (d.wp - d.kw) % stride != 0) {
    throw std::invalid_argument(std::string(op) +
                                ": output extent is not integral for input " + shape_str(input.shape) +
                                ", kernel " + shape_str(weights.shape) + ", stride " +
                                std::to_string(stride) + ", padding " + std::to_string(padding));
  }
  d.oh = (d.hp - d.kh) / stride + 1;
  d.ow = (d.wp - d.kw) / stride + 1;
  return d;
}

}  // namespace

Tensor conv2d_forward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                      int64_t stride, int64_t padding) {
  const ConvDims d = conv_dims(input, weights, bias, stride, padding, "conv2d_forward");

  Tensor padded;
  const Tensor* src = &input;
  if (padding > 0) {
    padded = Tensor({d.in_c, d.hp, d.wp});
    for (int64_t c = 0; c < d.in_c; ++c) {
      pad_channel(input.ptr() + c * d.h * d.w, d.h, d.w, padding, padded.ptr() + c * d.hp * d.wp);
    }
    src = &padded;
  }

  Tensor out({d.out_c, d.oh, d.ow});
  for (int64_t oc = 0; oc < d.out_c; ++oc) {
    double* o = out.ptr() + oc * d.oh * d.ow;
    const double b = bias.data[static_cast<size_t>(oc)];
    for (int64_t i = 0; i < d.oh * d.ow; ++i) o[i] = b;
    // accumulation order per output element is inC -> kH -> kW
    for (int64_t ic = 0; ic < d.in_c; ++ic) {
      const double* in = src->ptr() + ic * d.hp * d.wp;
      const double* k = weights.ptr() + (oc * d.in_c + ic) * d.kh * d.kw;
      for (int64_t kh = 0; kh < d.kh; ++kh) {
        for (int64_t kw = 0; kw < d.kw; ++kw) {
          const double wv = k[kh * d.kw + kw];
          for (int64_t oi = 0; oi < d.oh; ++oi) {
            const double* in_row = in + (oi * stride + kh) * d.wp + kw;
            double* o_row = o + oi * d.ow;
            if (stride == 1) {
              for (int64_t oj = 0; oj < d.ow; ++oj) o_row[oj] += wv * in_row[oj];
            } else {
              for (int64_t oj = 0; oj < d.ow; ++oj) o_row[oj] += wv * in_row[oj * stride];
            }
          }
        }
      }
    }
  }
  return out;
}

ConvGrads conv2d_backward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                          int64_t stride, int64_t padding, const Tensor& grad_out) {
  const ConvDims d = conv_dims(input, weights, bias, stride, padding, "conv2d_backward");
  if (grad_out.shape != std::vector<int64_t>{d.out_c, d.oh, d.ow}) {
    throw std::invalid_argument("conv2d_backward: grad_out shape " + shape_str(grad_out.shape) +
                                " does not match forward output " + shape_str({d.out_c, d.oh, d.ow}));
  }

  Tensor padded;
  const Tensor* src = &input;
  if (padding > 0) {
    padded = Tensor({d.in_c, d.hp, d.wp});
    for (int64_t c = 0; c < d.in_c; ++c) {
      pad_channel(input.ptr() + c * d.h * d.w, d.h, d.w, padding, padded.ptr() + c * d.hp * d.wp);
    }
    src = &padded;
  }

  ConvGrads g;
  g.bias = Tensor({d.out_c});
  g.weights = Tensor(weights.shape);
  Tensor grad_padded({d.in_c, d.hp, d.wp});

  for (int64_t oc = 0; oc < d.out_c; ++oc) {
    const double* go = grad_out.ptr() + oc * d.oh * d.ow;
    double bsum = 0.0;
    for (int64_t i = 0; i < d.oh * d.ow; ++i) bsum += go[i];
    g.bias.data[static_cast<size_t>(oc)] = bsum;

    for (int64_t ic = 0; ic < d.in_c; ++ic) {
      const double* in = src->ptr() + ic * d.hp * d.wp;
      double* gin = grad_padded.ptr() + ic * d.hp * d.wp;
      double* gk = g.weights.ptr() + (oc * d.in_c + ic) * d.kh * d.kw;
      const double* k = weights.ptr() + (oc * d.in_c + ic) * d.kh * d.kw;
      for (int64_t kh = 0; kh < d.kh; ++kh) {
        for (int64_t kw = 0; kw < d.kw; ++kw) {
          const double wv = k[kh * d.kw + kw];
          double wsum = 0.0;
          for (int64_t oi = 0; oi < d.oh; ++oi) {
            const double* in_row = in + (oi * stride + kh) * d.wp + kw;
            double* gin_row = gin + (oi * stride + kh) * d.wp + kw;
            const double* go_row = go + oi * d.ow;
            if (stride == 1) {
              for (int64_t oj = 0; oj < d.ow; ++oj) {
                wsum += go_row[oj] * in_row[oj];
                gin_row[oj] += wv * go_row[oj];
              }
            } else {
              for (int64_t oj = 0; oj < d.ow; ++oj) {
                wsum += go_row[oj] * in_row[oj * stride];
                gin_row[oj * stride] += wv * go_row[oj];
              }
            }
          }
          gk[kh * d.kw + kw] = wsum;
        }
      }
    }
  }

  if (padding == 0) {
    g.input = std::move(grad_padded);
  } else {
    g.input = Tensor({d.in_c, d.h, d.w});
    for (int64_t c = 0; c < d.in_c; ++c) {
      const double* gp = grad_padded.ptr() + c * d.hp * d.wp;
      double* gi = g.input.ptr() + c * d.h * d.w;
      for (int64_t i = 0; i < d.h; ++i) {
        for (int64_t j = 0; j < d.w; ++j) gi[i * d.w + j] = gp[(i + padding) * d.wp + (j + padding)];
      }
    }
  }
  return g;
}

namespace {
void check_dense(const Tensor& input, const Tensor& weights, const Tensor& bias, const char* op) {
  if (input.rank() != 1 || weights.rank() != 2 || bias.rank() != 1) {
    throw std::invalid_argument(std::string(op) + ": expected vector input, out x in weights, vector bias");
  }
  if (weights.shape[1] != input.shape[0] || weights.shape[0] != bias.shape[0]) {
    throw std::invalid_argument(std::string(op) + ": weights " + shape_str(weights.shape) +
                                " do not match input " + shape_str(input.shape) + " / bias " +
                                shape_str(bias.shape));
  }
}
}  // namespace

Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias) {
  check_dense(input, weights, bias, "dense_forward");
  const int64_t out_n = weights.shape[0];
  const int64_t in_n = weights.shape[1];
  Tensor out({out_n});
  for (int64_t o = 0; o < out_n; ++o) {
    double s = bias.data[static_cast<size_t>(o)];
    const double* wr = weights.ptr() + o * in_n;
    for (int64_t i = 0; i < in_n; ++i) s += wr[i] * input.data[static_cast<size_t>(i)];
    out.data[static_cast<size_t>(o)] = s;
  }
  return out;
}

DenseGrads dense_backward(const Tensor& input, const Tensor& weights, const Tensor& bias,
                          const Tensor& grad_out) {
  check_dense(input, weights, bias, "dense_backward");
  if (grad_out.shape != bias.shape) {
    throw std::invalid_argument("dense_backward: grad_out shape " + shape_str(grad_out.shape) +
                                " does not match output " + shape_str(bias.shape));
  }
  const int64_t out_n = weights.shape[0];
  const int64_t in_n = weights.shape[1];
  DenseGrads g;
  g.input = Tensor({in_n});
  g.weights = Tensor(weights.shape);
  g.bias = grad_out;
  for (int64_t o = 0; o < out_n; ++o) {
    const double go = grad_out.data[static_cast<size_t>(o)];
    const double* wr = weights.ptr() + o * in_n;
    double* gw = g.weights.ptr() + o * in_n;
    for (int64_t i = 0; i < in_n; ++i) {
      gw[i] = go * input.data[static_cast<size_t>(i)];
      g.input.data[static_cast<size_t>(i)] += go * wr[i];
    }
  }
  return g;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
  require_same_shape(x, grad_out, "relu_backward");
  Tensor g = grad_out;
  for (size_t i = 0; i < g.data.size(); ++i) {
    if (x.data[i] <= 0.0) g.data[i] = 0.0;
  }
  return g;
}

Tensor sigmoid(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.data) {
    if (v >= 0.0) {
      v = 1.0 / (1.0 + std::exp(-v));
    } else {
      const double e = std::exp(v);
      v = e / (1.0 + e);
    }
  }
  return out;
}

Tensor sigmoid_backward(const Tensor& y, const Tensor& grad_out) {
  require_same_shape(y, grad_out, "sigmoid_backward");
  Tensor g = grad_out;
  for (size_t i = 0; i < g.data.size(); ++i) g.data[i] *= y.data[i] * (1.0 - y.data[i]);
  return g;
}

Tensor global_average_pool(const Tensor& x) {
  check_image(x, "global_average_pool");
  const int64_t c = x.shape[0], h = x.shape[1], w = x.shape[2];
  if (h < 1 || w < 1) {
    throw std::invalid_argument("global_average_pool: empty spatial extents " + shape_str(x.shape));
  }
  Tensor out({c, 1, 1});
  const double inv = 1.0 / static_cast<double>(h * w);
  for (int64_t ch = 0; ch < c; ++ch) {
    const double* p = x.ptr() + ch * h * w;
    double s = 0.0;
    for (int64_t i = 0; i < h * w; ++i) s += p[i];
    out.data[static_cast<size_t>(ch)] = s * inv;
  }
  return out;
}

Tensor global_average_pool_backward(const std::vector<int64_t>& input_shape,
                                    const Tensor& grad_out) {
  if (input_shape.size() != 3) {
    throw std::invalid_argument("global_average_pool_backward: expected C x H x W input shape");
  }
  const int64_t c = input_shape[0], h = input_shape[1], w = input_shape[2];
  if (grad_out.shape != std::vector<int64_t>{c, 1, 1}) {
    throw std::invalid_argument("global_average_pool_backward: grad_out shape " +
                                shape_str(grad_out.shape) + " does not match " +
                                shape_str({c, 1, 1}));
  }
  Tensor g(input_shape);
  const double inv = 1.0 / static_cast<double>(h * w);
  for (int64_t ch = 0; ch < c; ++ch) {
    const double v = grad_out.data[static_cast<size_t>(ch)] * inv;
    double* p = g.ptr() + ch * h * w;
    for (int64_t i = 0; i < h * w; ++i) p[i] = v;
  }
  return g;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
  return concat_channels(std::vector<const Tensor*>{&a, &b});
}

Tensor concat_channels(const std::vector<const Tensor*>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_channels: no inputs");
  int64_t h = -1, w = -1, c_total = 0;
  for (const Tensor* t : parts) {
    check_image(*t, "concat_channels");
    if (h < 0) {
      h = t->shape[1];
      w = t->shape[2];
    } else if (t->shape[1] != h || t->shape[2] != w) {
      throw std::invalid_argument("concat_channels: spatial mismatch " + shape_str(parts[0]->shape) +
                                  " vs " + shape_str(t->shape));
    }
    c_total += t->shape[0];
  }
  Tensor out({c_total, h, w});
  double* o = out.ptr();
  for (const Tensor* t : parts) {
    const int64_t n = t->size();
    for (int64_t i = 0; i < n; ++i) o[i] = t->data[static_cast<size_t>(i)];
    o += n;
  }
  return out;
}

std::pair<Tensor, Tensor> split_channels(const Tensor& x, int64_t ca) {
  auto v = split_channels(x, std::vector<int64_t>{ca, x.shape.empty() ? 0 : x.shape[0] - ca});
  return {std::move(v[0]), std::move(v[1])};
}

std::vector<Tensor> split_channels(const Tensor& x, const std::vector<int64_t>& channel_counts) {
  check_image(x, "split_channels");
  int64_t total = 0;
  for (int64_t c : channel_counts) {
    if (c < 0) throw std::invalid_argument("split_channels: negative channel count");
    total += c;
  }
  if (total != x.shape[0]) {
    throw std::invalid_argument("split_channels: counts sum to " + std::to_string(total) +
                                " but input has " + std::to_string(x.shape[0]) + " channels");
  }
  std::vector<Tensor> out;
  out.reserve(channel_counts.size());
  const double* p = x.ptr();
  const int64_t h = x.shape[1], w = x.shape[2];
  for (int64_t c : channel_counts) {
    Tensor t({c, h, w});
    const int64_t n = t.size();
    for (int64_t i = 0; i < n; ++i) t.data[static_cast<size_t>(i)] = p[i];
    p += n;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace spa
