#pragma once

#include "starpde/rational.hpp"

#include <cstddef>
#include <vector>

namespace starpde {

/// Dense row-major matrix over any ring-like element type.
template <class T>
class Mat {
public:
    Mat(std::size_t rows, std::size_t cols, const T& fill)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const T& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_ || a.cols_ == 0) throw Error("matrix dimension mismatch");
        Mat r(a.rows_, b.cols_, a.at(0, 0) * b.at(0, 0));
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < b.cols_; ++j) {
                T acc = a.at(i, 0) * b.at(0, j);
                for (std::size_t k = 1; k < a.cols_; ++k) acc += a.at(i, k) * b.at(k, j);
                r.at(i, j) = acc;
            }
        }
        return r;
    }

    friend Mat operator+(Mat a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix dimension mismatch");
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] += b.a_[i];
        return a;
    }

    friend Mat operator-(Mat a, const Mat& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix dimension mismatch");
        for (std::size_t i = 0; i < a.a_.size(); ++i) a.a_[i] -= b.a_[i];
        return a;
    }

    Mat operator-() const {
        Mat r = *this;
        for (auto& x : r.a_) x = -x;
        return r;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

    Mat transposed() const {
        Mat r(cols_, rows_, a_[0]);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Mat scaled(const T& c) const {
        Mat r = *this;
        for (auto& x : r.a_) x = x * c;
        return r;
    }

    /// Determinant by Laplace expansion with a column-subset table; works
    /// over any commutative ring (no divisions).
    T det() const {
        if (rows_ != cols_ || rows_ == 0) throw Error("determinant of non-square matrix");
        const std::size_t n = rows_;
        // table[mask] = det of the top |mask| rows restricted to columns in mask
        std::vector<T> table(std::size_t(1) << n, a_[0]);
        std::vector<bool> known(std::size_t(1) << n, false);
        for (std::size_t j = 0; j < n; ++j) {
            table[std::size_t(1) << j] = at(0, j);
            known[std::size_t(1) << j] = true;
        }
        for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
            if (known[mask]) continue;
            std::size_t k = static_cast<std::size_t>(__builtin_popcountll(mask));
            if (k < 2) continue;
            bool first = true;
            T acc = a_[0];
            std::size_t seen = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (!(mask & (std::size_t(1) << j))) continue;
                T term = at(k - 1, j) * table[mask ^ (std::size_t(1) << j)];
                bool negative = ((k - 1 - seen) % 2) != 0;
                if (first) {
                    acc = negative ? -term : term;
                    first = false;
                } else {
                    if (negative)
                        acc -= term;
                    else
                        acc += term;
                }
                ++seen;
            }
            table[mask] = acc;
            known[mask] = true;
        }
        return table[(std::size_t(1) << n) - 1];
    }

private:
    std::size_t rows_, cols_;
    std::vector<T> a_;
};

} // namespace starpde
