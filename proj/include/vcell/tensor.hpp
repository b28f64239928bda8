#pragma once
// Dense row-major containers for (user, bs, band) tensors and 2-D tables.

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace vcell {

template <typename T>
class Tensor3T {
public:
    Tensor3T() = default;
    Tensor3T(std::size_t d0, std::size_t d1, std::size_t d2, T fill = T{})
        : d0_(d0), d1_(d1), d2_(d2), v_(d0 * d1 * d2, fill) {}

    T& operator()(std::size_t i, std::size_t j, std::size_t k) {
        assert(i < d0_ && j < d1_ && k < d2_);
        return v_[(i * d1_ + j) * d2_ + k];
    }
    T operator()(std::size_t i, std::size_t j, std::size_t k) const {
        assert(i < d0_ && j < d1_ && k < d2_);
        return v_[(i * d1_ + j) * d2_ + k];
    }

    std::size_t dim0() const { return d0_; }
    std::size_t dim1() const { return d1_; }
    std::size_t dim2() const { return d2_; }
    std::size_t size() const { return v_.size(); }

    std::vector<T>& data() { return v_; }
    const std::vector<T>& data() const { return v_; }

    bool same_shape(const Tensor3T& o) const {
        return d0_ == o.d0_ && d1_ == o.d1_ && d2_ == o.d2_;
    }

    friend bool operator==(const Tensor3T&, const Tensor3T&) = default;

private:
    std::size_t d0_ = 0, d1_ = 0, d2_ = 0;
    std::vector<T> v_;
};

using Tensor3 = Tensor3T<double>;

// Binary channel-assignment indicators gamma(user, bs, band).
using ChannelAssignment = Tensor3T<std::uint8_t>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : r_(rows), c_(cols), v_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < r_ && j < c_);
        return v_[i * c_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < r_ && j < c_);
        return v_[i * c_ + j];
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<double> v_;
};

} // namespace vcell
