#include "hgat/tensor.hpp"

#include <cmath>
#include <sstream>

namespace hgat {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) {
    if (e == 0) throw DimensionError("Tensor: zero extent is not allowed");
    n *= e;
  }
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_product(shape_) != data_.size()) {
    throw DimensionError("Tensor: data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str());
  }
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::full(std::vector<std::size_t> shape, double v) {
  Tensor t(std::move(shape));
  t.fill(v);
  return t;
}

Tensor Tensor::zeros_like(const Tensor& t) { return Tensor(t.shape_); }

std::size_t Tensor::extent(std::size_t axis) const {
  if (axis >= shape_.size()) {
    throw DimensionError("Tensor: axis " + std::to_string(axis) +
                         " out of range for shape " + shape_str());
  }
  return shape_[axis];
}

double& Tensor::at(std::size_t i, std::size_t j) {
  if (rank() != 2) throw DimensionError("Tensor::at(i,j) requires rank 2, got " + shape_str());
  return data_[i * shape_[1] + j];
}

double Tensor::at(std::size_t i, std::size_t j) const {
  return const_cast<Tensor*>(this)->at(i, j);
}

double& Tensor::at(std::size_t i, std::size_t j, std::size_t k) {
  if (rank() != 3) throw DimensionError("Tensor::at(i,j,k) requires rank 3, got " + shape_str());
  return data_[(i * shape_[1] + j) * shape_[2] + k];
}

double Tensor::at(std::size_t i, std::size_t j, std::size_t k) const {
  return const_cast<Tensor*>(this)->at(i, j, k);
}

double Tensor::item() const {
  if (size() != 1) {
    throw DimensionError("Tensor::item: expected a single element, got shape " + shape_str());
  }
  return data_[0];
}

std::string Tensor::shape_str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) os << "x";
    os << shape_[i];
  }
  os << "]";
  return os.str();
}

void Tensor::fill(double v) {
  for (double& x : data_) x = v;
}

bool Tensor::all_finite() const {
  for (double x : data_) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

void Tensor::require_finite(const std::string& context) const {
  if (!all_finite()) {
    throw NumericError(context + ": non-finite value in tensor of shape " + shape_str());
  }
}

namespace ops {

namespace {

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shape mismatch " + a.shape_str() +
                         " vs " + b.shape_str());
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw DimensionError("matmul: requires rank-2 operands, got " + a.shape_str() +
                         " and " + b.shape_str());
  }
  if (a.extent(1) != b.extent(0)) {
    throw DimensionError("matmul: inner extents disagree, " + a.shape_str() +
                         " vs " + b.shape_str());
  }
  const std::size_t m = a.extent(0), k = a.extent(1), n = b.extent(1);
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      double av = a.data()[i * k + p];
      if (av == 0.0) continue;
      const double* brow = b.data() + p * n;
      double* orow = out.data() + i * n;
      for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
  }
  out.require_finite("matmul");
  return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) {
    throw DimensionError("matmul_nt: requires rank-2 operands, got " + a.shape_str() +
                         " and " + b.shape_str());
  }
  if (a.extent(1) != b.extent(1)) {
    throw DimensionError("matmul_nt: inner extents disagree, " + a.shape_str() +
                         " vs " + b.shape_str() + " (transposed)");
  }
  const std::size_t m = a.extent(0), k = a.extent(1), n = b.extent(0);
  Tensor out({m, n});
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a.data() + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const double* brow = b.data() + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      out.data()[i * n + j] = acc;
    }
  }
  out.require_finite("matmul_nt");
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  out.require_finite("add");
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "sub");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  out.require_finite("sub");
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "mul");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  out.require_finite("mul");
  return out;
}

Tensor scale(const Tensor& a, double c) {
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= c;
  out.require_finite("scale");
  return out;
}

Tensor sigmoid(const Tensor& a) {
  a.require_finite("sigmoid input");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double x = out[i];
    // Branch keeps exp() argument non-positive so it cannot overflow.
    if (x >= 0.0) {
      out[i] = 1.0 / (1.0 + std::exp(-x));
    } else {
      double e = std::exp(x);
      out[i] = e / (1.0 + e);
    }
  }
  return out;
}

Tensor tanh(const Tensor& a) {
  a.require_finite("tanh input");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
  return out;
}

Tensor softmax(const Tensor& a, std::size_t axis) {
  a.require_finite("softmax input");
  if (a.rank() == 1) {
    if (axis != 0) throw DimensionError("softmax: axis out of range for rank-1 tensor");
    Tensor out = a;
    double mx = out[0];
    for (std::size_t i = 1; i < out.size(); ++i) mx = std::max(mx, out[i]);
    double denom = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = std::exp(out[i] - mx);
      denom += out[i];
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= denom;
    return out;
  }
  if (a.rank() != 2 || axis > 1) {
    throw DimensionError("softmax: supported on rank-1 or rank-2 tensors with a valid axis, got " +
                         a.shape_str() + " axis " + std::to_string(axis));
  }
  const std::size_t rows = a.extent(0), cols = a.extent(1);
  Tensor out = a;
  if (axis == 1) {
    for (std::size_t i = 0; i < rows; ++i) {
      double* row = out.data() + i * cols;
      double mx = row[0];
      for (std::size_t j = 1; j < cols; ++j) mx = std::max(mx, row[j]);
      double denom = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        row[j] = std::exp(row[j] - mx);
        denom += row[j];
      }
      for (std::size_t j = 0; j < cols; ++j) row[j] /= denom;
    }
  } else {
    for (std::size_t j = 0; j < cols; ++j) {
      double mx = out.data()[j];
      for (std::size_t i = 1; i < rows; ++i) mx = std::max(mx, out.data()[i * cols + j]);
      double denom = 0.0;
      for (std::size_t i = 0; i < rows; ++i) {
        double& v = out.data()[i * cols + j];
        v = std::exp(v - mx);
        denom += v;
      }
      for (std::size_t i = 0; i < rows; ++i) out.data()[i * cols + j] /= denom;
    }
  }
  return out;
}

double sum(const Tensor& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i];
  if (!std::isfinite(acc)) throw NumericError("sum: non-finite result");
  return acc;
}

}  // namespace ops

}  // namespace hgat
