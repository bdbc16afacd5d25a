#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hgat/errors.hpp"

namespace hgat {

// Dense row-major tensor of 64-bit reals. Value semantics throughout; every
// public operation leaves the data finite or throws NumericError.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);  // zero-filled
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor scalar(double v);
  static Tensor full(std::vector<std::size_t> shape, double v);
  static Tensor zeros_like(const Tensor& t);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  std::size_t extent(std::size_t axis) const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  // Rank-checked element access.
  double& at(std::size_t i, std::size_t j);
  double at(std::size_t i, std::size_t j) const;
  double& at(std::size_t i, std::size_t j, std::size_t k);
  double at(std::size_t i, std::size_t j, std::size_t k) const;

  // Value of a single-element tensor.
  double item() const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_str() const;

  void fill(double v);
  bool all_finite() const;
  // Throws NumericError mentioning `context` if any entry is NaN/Inf.
  void require_finite(const std::string& context) const;

  bool operator==(const Tensor& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
  }

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// Plain (untaped) forward math. The Tape wraps these when gradients are
// wanted; the rest of the pipeline calls them directly.
namespace ops {

Tensor matmul(const Tensor& a, const Tensor& b);
// a (m*k) times b-transposed where b is (n*k); result m*n.
Tensor matmul_nt(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double c);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
// Softmax over slices along `axis` (rank 1 or 2).
Tensor softmax(const Tensor& a, std::size_t axis);
double sum(const Tensor& a);

}  // namespace ops

}  // namespace hgat
