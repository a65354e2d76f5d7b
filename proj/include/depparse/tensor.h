#ifndef DEPPARSE_TENSOR_H_
#define DEPPARSE_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace depparse {

using Vector = std::vector<double>;

// Dense row-major tensor of rank 1 or 2. Vectors have shape {n}.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::size_t n) : shape_{n}, data_(n, 0.0) {}
  Tensor(std::size_t rows, std::size_t cols)
      : shape_{rows, cols}, data_(rows * cols, 0.0) {}

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  std::size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  std::size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols(), cols()}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols(), cols()};
  }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  std::string shape_string() const;

  // Zero-filled tensor with this tensor's shape.
  Tensor zeros_like() const {
    Tensor t;
    t.shape_ = shape_;
    t.data_.assign(data_.size(), 0.0);
    return t;
  }

  static Tensor from_shape(std::vector<std::size_t> shape);

  bool operator==(const Tensor& other) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

inline MatrixMap as_matrix(Tensor& t) {
  return MatrixMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                   static_cast<Eigen::Index>(t.cols()));
}
inline ConstMatrixMap as_matrix(const Tensor& t) {
  return ConstMatrixMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                        static_cast<Eigen::Index>(t.cols()));
}
inline VectorMap as_vector(Vector& v) {
  return VectorMap(v.data(), static_cast<Eigen::Index>(v.size()));
}
inline ConstVectorMap as_vector(const Vector& v) {
  return ConstVectorMap(v.data(), static_cast<Eigen::Index>(v.size()));
}
inline VectorMap as_vector(Tensor& t) {
  return VectorMap(t.data(), static_cast<Eigen::Index>(t.size()));
}
inline ConstVectorMap as_vector(const Tensor& t) {
  return ConstVectorMap(t.data(), static_cast<Eigen::Index>(t.size()));
}

}  // namespace depparse

#endif  // DEPPARSE_TENSOR_H_
