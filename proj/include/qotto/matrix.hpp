#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qotto {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Sized for the small joint spaces this
/// library works with (a few hundred rows at most); everything is by value.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {
        if (rows == 0 || cols == 0)
            throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
        const std::size_t nr = rows.size();
        const std::size_t nc = nr ? rows.begin()->size() : 0;
        ComplexMatrix m(nr, nc);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != nc)
                throw std::invalid_argument("ComplexMatrix::from_rows: ragged rows");
            std::size_t j = 0;
            for (const auto& v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<cplx>& data() const { return data_; }

    ComplexMatrix operator+(const ComplexMatrix& o) const {
        require_same_shape(o, "operator+");
        ComplexMatrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
        return r;
    }

    ComplexMatrix operator-(const ComplexMatrix& o) const {
        require_same_shape(o, "operator-");
        ComplexMatrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
        return r;
    }

    ComplexMatrix operator*(const ComplexMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("ComplexMatrix::operator*: inner dimensions differ (" +
                                        std::to_string(cols_) + " vs " + std::to_string(o.rows_) + ")");
        ComplexMatrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const cplx aik = (*this)(i, k);
                if (aik == cplx{0.0, 0.0}) continue;
                const cplx* brow = &o.data_[k * o.cols_];
                cplx* rrow = &r.data_[i * o.cols_];
                for (std::size_t j = 0; j < o.cols_; ++j) rrow[j] += aik * brow[j];
            }
        }
        return r;
    }

    friend ComplexMatrix operator*(cplx s, const ComplexMatrix& m) {
        ComplexMatrix r = m;
        for (auto& v : r.data_) v *= s;
        return r;
    }
    friend ComplexMatrix operator*(double s, const ComplexMatrix& m) { return cplx{s, 0.0} * m; }

    ComplexMatrix adjoint() const {
        ComplexMatrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    cplx trace() const {
        require_square("trace");
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double max_abs_diff(const ComplexMatrix& o) const {
        require_same_shape(o, "max_abs_diff");
        double m = 0.0;
        for (std::size_t k = 0; k < data_.size(); ++k)
            m = std::max(m, std::abs(data_[k] - o.data_[k]));
        return m;
    }

    bool all_finite() const {
        for (const auto& v : data_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    bool is_hermitian(double tol) const {
        if (!is_square()) return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        return true;
    }

    bool is_unitary(double tol) const {
        if (!is_square()) return false;
        return (adjoint() * *this).max_abs_diff(identity(rows_)) <= tol;
    }

private:
    void require_same_shape(const ComplexMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("ComplexMatrix::") + op + ": shape mismatch");
    }
    void require_square(const char* op) const {
        if (!is_square())
            throw std::invalid_argument(std::string("ComplexMatrix::") + op + ": matrix not square");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// A unitary is structurally just a matrix; unitarity is enforced by the
/// samplers' constructions and checked in the test suites.
using UnitaryMatrix = ComplexMatrix;

/// Kronecker product with the first factor slowest:
/// (a (x) b)[i*p+k, j*q+l] = a[i,j] * b[k,l] for b of shape p x q.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

/// Trace out every tensor factor except dims[keep]. Factor order matches
/// kron: dims[0] is the slowest index. Trace is preserved.
inline ComplexMatrix partial_trace(const ComplexMatrix& joint,
                                   const std::vector<std::size_t>& dims, std::size_t keep) {
    if (!joint.is_square())
        throw std::invalid_argument("partial_trace: joint matrix must be square");
    if (dims.empty() || keep >= dims.size())
        throw std::invalid_argument("partial_trace: keep index out of range");
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw std::invalid_argument("partial_trace: zero factor dimension");
        total *= d;
    }
    if (total != joint.rows())
        throw std::invalid_argument("partial_trace: factor dimensions multiply to " +
                                    std::to_string(total) + " but joint dimension is " +
                                    std::to_string(joint.rows()));

    // stride of each factor in the flattened row-major index
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t f = dims.size(); f-- > 1;) stride[f - 1] = stride[f] * dims[f];

    const std::size_t dk = dims[keep];
    const std::size_t rest = total / dk;
    ComplexMatrix out(dk, dk);

    // enumerate the traced-out multi-index once per (i,j) block
    for (std::size_t m = 0; m < rest; ++m) {
        // expand m into offsets over the non-kept factors
        std::size_t off = 0, q = m;
        for (std::size_t f = dims.size(); f-- > 0;) {
            if (f == keep) continue;
            off += (q % dims[f]) * stride[f];
            q /= dims[f];
        }
        for (std::size_t i = 0; i < dk; ++i)
            for (std::size_t j = 0; j < dk; ++j)
                out(i, j) += joint(off + i * stride[keep], off + j * stride[keep]);
    }
    return out;
}

}  // namespace qotto
