#pragma once

#include <cassert>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace augward {

// Dense row-major matrix of doubles. Plain value type, no views.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, fill) {
    assert(rows >= 0 && cols >= 0);
  }
  Mat(int rows, int cols, std::vector<double> data)
      : rows_(rows), cols_(cols), d_(std::move(data)) {
    assert(d_.size() == static_cast<size_t>(rows) * cols);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return d_.size(); }

  double& operator()(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }
  const std::vector<double>& vec() const { return d_; }
  std::vector<double>& vec() { return d_; }

  double* row(int i) { return d_.data() + static_cast<size_t>(i) * cols_; }
  const double* row(int i) const { return d_.data() + static_cast<size_t>(i) * cols_; }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : d_) s += v * v;
    return std::sqrt(s);
  }

  double sum() const {
    double s = 0.0;
    for (double v : d_) s += v;
    return s;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> d_;
};

inline double dot(const Mat& a, const Mat& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

inline std::string shape_str(int r, int c) {
  return "(" + std::to_string(r) + "x" + std::to_string(c) + ")";
}

}  // namespace augward
