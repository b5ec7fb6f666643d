#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace amc::nn {

// Dense row-major tensor of doubles.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    data.assign(numel_of(shape), 0.0);
  }

  static std::size_t numel_of(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return n;
  }

  std::size_t numel() const { return data.size(); }
  std::size_t dim(std::size_t i) const { return shape.at(i); }
  std::size_t rank() const { return shape.size(); }

  double& operator()(std::size_t i) { return data[i]; }
  double operator()(std::size_t i) const { return data[i]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * shape[1] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * shape[1] + j]; }
  double& operator()(std::size_t b, std::size_t c, std::size_t h, std::size_t w) {
    return data[((b * shape[1] + c) * shape[2] + h) * shape[3] + w];
  }
  double operator()(std::size_t b, std::size_t c, std::size_t h, std::size_t w) const {
    return data[((b * shape[1] + c) * shape[2] + h) * shape[3] + w];
  }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  void require_shape(const std::vector<std::size_t>& s, const char* who) const {
    if (shape != s) throw std::invalid_argument(std::string(who) + ": unexpected tensor shape");
  }
};

}  // namespace amc::nn
