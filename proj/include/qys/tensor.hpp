// Dense rank-R tensors over a single chart dimension n (n <= 6 in practice).
#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

namespace qys {

/// Rank-R tensor with all R axes of length n, flat row-major storage.
/// No symmetry compression; desk-scale dimensions keep this cheap.
template <int Rank, typename Scalar = double>
class Tensor {
    static_assert(Rank >= 1);

public:
    Tensor() = default;
    explicit Tensor(int n) : n_(n) {
        std::size_t sz = 1;
        for (int r = 0; r < Rank; ++r) sz *= static_cast<std::size_t>(n);
        data_.assign(sz, Scalar{});
    }

    int dim() const { return n_; }

    template <typename... Ix>
    Scalar& operator()(Ix... ix) {
        static_assert(sizeof...(Ix) == Rank);
        return data_[flat(ix...)];
    }
    template <typename... Ix>
    const Scalar& operator()(Ix... ix) const {
        static_assert(sizeof...(Ix) == Rank);
        return data_[flat(ix...)];
    }

    void setZero() { data_.assign(data_.size(), Scalar{}); }

    const std::vector<Scalar>& data() const { return data_; }
    std::vector<Scalar>& data() { return data_; }

private:
    template <typename... Ix>
    std::size_t flat(Ix... ix) const {
        const std::array<int, Rank> idx{static_cast<int>(ix)...};
        std::size_t f = 0;
        for (int r = 0; r < Rank; ++r) {
            assert(idx[r] >= 0 && idx[r] < n_);
            f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[r]);
        }
        return f;
    }

    int n_ = 0;
    std::vector<Scalar> data_;
};

using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;
using Tensor5 = Tensor<5>;

template <int Rank, typename Scalar>
double max_abs(const Tensor<Rank, Scalar>& t) {
    double m = 0.0;
    for (const auto& x : t.data()) m = std::max(m, std::abs(x));
    return m;
}

template <int Rank, typename Scalar>
double frobenius(const Tensor<Rank, Scalar>& t) {
    double s = 0.0;
    for (const auto& x : t.data()) s += x * x;
    return std::sqrt(s);
}

}  // namespace qys
