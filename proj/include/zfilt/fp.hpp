#ifndef ZFILT_FP_HPP
#define ZFILT_FP_HPP

// Prime field arithmetic with a runtime modulus, and dense matrices over it.

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "arith.hpp"

namespace zfilt {

using Elem = std::uint32_t;

/// The prime field F_p. Elements are plain integers in [0, p); every
/// arithmetic operation on them goes through this type.
class PrimeField {
   public:
    PrimeField() = default;
    explicit PrimeField(std::uint32_t p) : p_(p) {
        require_prime(p);
        if (p > 65521) throw std::invalid_argument("PrimeField: p too large (must fit 16 bits)");
    }

    std::uint32_t p() const noexcept { return p_; }

    Elem reduce(std::int64_t v) const noexcept {
        std::int64_t m = v % static_cast<std::int64_t>(p_);
        return static_cast<Elem>(m < 0 ? m + p_ : m);
    }
    Elem add(Elem a, Elem b) const noexcept {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const noexcept { return static_cast<Elem>((std::uint64_t{a} * b) % p_); }

    Elem pow(Elem a, std::uint64_t e) const noexcept {
        Elem r = 1 % p_;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
        return pow(a, p_ - 2);
    }

    /// Smallest generator of the multiplicative group.
    Elem primitive_root() const {
        if (p_ == 2) return 1;
        auto fac = factorize(p_ - 1);
        for (Elem g = 2; g < p_; ++g) {
            bool ok = true;
            for (auto [q, e] : fac)
                if (pow(g, (p_ - 1) / q) == 1) {
                    ok = false;
                    break;
                }
            if (ok) return g;
        }
        throw std::logic_error("no primitive root");
    }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

   private:
    std::uint32_t p_ = 2;
};

/// Dense row-major matrix over F_p.
class FpMatrix {
   public:
    FpMatrix() = default;
    FpMatrix(PrimeField f, std::size_t rows, std::size_t cols)
        : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static FpMatrix identity(PrimeField f, std::size_t n) {
        FpMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    /// Builds from integer entries (reduced mod p), row-major.
    static FpMatrix from_rows(PrimeField f, const std::vector<std::vector<std::int64_t>>& rows) {
        std::size_t c = rows.empty() ? 0 : rows.front().size();
        FpMatrix m(f, rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw std::invalid_argument("FpMatrix: ragged rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = f.reduce(rows[i][j]);
        }
        return m;
    }

    const PrimeField& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Elem& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    Elem operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<Elem> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const Elem> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    const std::vector<Elem>& data() const noexcept { return data_; }

    std::vector<Elem> column(std::size_t j) const {
        std::vector<Elem> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b) {
        if (a.cols_ != b.rows_ || !(a.field_ == b.field_)) throw std::invalid_argument("FpMatrix: shape mismatch");
        const PrimeField& f = a.field_;
        FpMatrix c(f, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                Elem aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) = f.add(c(i, j), f.mul(aik, b(k, j)));
            }
        return c;
    }

    /// Matrix times column vector.
    std::vector<Elem> apply(std::span<const Elem> v) const {
        if (v.size() != cols_) throw std::invalid_argument("FpMatrix::apply: dimension mismatch");
        std::vector<Elem> out(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::uint64_t acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc += std::uint64_t{(*this)(i, j)} * v[j];
            out[i] = static_cast<Elem>(acc % field_.p());
        }
        return out;
    }

    friend bool operator==(const FpMatrix& a, const FpMatrix& b) {
        return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend auto operator<=>(const FpMatrix& a, const FpMatrix& b) {
        if (auto c = a.rows_ <=> b.rows_; c != 0) return c;
        if (auto c = a.cols_ <=> b.cols_; c != 0) return c;
        return a.data_ <=> b.data_;
    }

    FpMatrix transposed() const {
        FpMatrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Elem determinant() const;
    std::size_t rank() const;
    bool invertible() const { return rows_ == cols_ && rank() == rows_; }

    friend std::ostream& operator<<(std::ostream& os, const FpMatrix& m) {
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << '[';
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << m(i, j);
            os << "]\n";
        }
        return os;
    }

   private:
    PrimeField field_{};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Elem> data_;
};

/// In-place reduced row echelon form. Returns the pivot columns. Zero rows
/// are moved to the bottom; the caller may drop them using the pivot count.
inline std::vector<std::size_t> rref_in_place(FpMatrix& m) {
    const PrimeField& f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && m(piv, c) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
        Elem s = f.inv(m(r, c));
        for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(m(r, j), s);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0) continue;
            Elem t = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(t, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t FpMatrix::rank() const {
    FpMatrix copy = *this;
    return rref_in_place(copy).size();
}

inline Elem FpMatrix::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant: non-square matrix");
    FpMatrix m = *this;
    const PrimeField& f = field_;
    Elem det = 1;
    for (std::size_t c = 0; c < cols_; ++c) {
        std::size_t piv = c;
        while (piv < rows_ && m(piv, c) == 0) ++piv;
        if (piv == rows_) return 0;
        if (piv != c) {
            for (std::size_t j = 0; j < cols_; ++j) std::swap(m(piv, j), m(c, j));
            det = f.neg(det);
        }
        det = f.mul(det, m(c, c));
        Elem s = f.inv(m(c, c));
        for (std::size_t i = c + 1; i < rows_; ++i) {
            if (m(i, c) == 0) continue;
            Elem t = f.mul(m(i, c), s);
            for (std::size_t j = c; j < cols_; ++j) m(i, j) = f.sub(m(i, j), f.mul(t, m(c, j)));
        }
    }
    return det;
}

/// Expresses vectors in the row span of a fixed family of vectors.
///
/// Precomputes an echelon form E = T * B of the family B together with the
/// transform T, so each query costs one reduction against E.
class SpanSolver {
   public:
    SpanSolver() = default;
    SpanSolver(PrimeField f, std::vector<std::vector<Elem>> family, std::size_t dim) : field_(f), dim_(dim) {
        const std::size_t n = family.size();
        // Augmented [B | I], echelonize on the B part only.
        FpMatrix aug(f, n, dim + n);
        for (std::size_t i = 0; i < n; ++i) {
            if (family[i].size() != dim) throw std::invalid_argument("SpanSolver: dimension mismatch");
            for (std::size_t j = 0; j < dim; ++j) aug(i, j) = family[i][j];
            aug(i, dim + i) = 1;
        }
        std::size_t r = 0;
        for (std::size_t c = 0; c < dim && r < n; ++c) {
            std::size_t piv = r;
            while (piv < n && aug(piv, c) == 0) ++piv;
            if (piv == n) continue;
            if (piv != r)
                for (std::size_t j = 0; j < aug.cols(); ++j) std::swap(aug(piv, j), aug(r, j));
            Elem s = f.inv(aug(r, c));
            for (std::size_t j = 0; j < aug.cols(); ++j) aug(r, j) = f.mul(aug(r, j), s);
            for (std::size_t i = 0; i < n; ++i) {
                if (i == r || aug(i, c) == 0) continue;
                Elem t = aug(i, c);
                for (std::size_t j = 0; j < aug.cols(); ++j) aug(i, j) = f.sub(aug(i, j), f.mul(t, aug(r, j)));
            }
            pivots_.push_back(c);
            ++r;
        }
        rank_ = r;
        echelon_ = std::move(aug);
        family_size_ = n;
    }

    std::size_t rank() const noexcept { return rank_; }
    std::size_t family_size() const noexcept { return family_size_; }

    /// Coefficients a with sum_i a_i family[i] = v, or nullopt if v is not
    /// in the span. When the family is dependent one solution is returned.
    std::optional<std::vector<Elem>> solve(std::span<const Elem> v) const {
        if (v.size() != dim_) throw std::invalid_argument("SpanSolver::solve: dimension mismatch");
        const PrimeField& f = field_;
        std::vector<Elem> residual(v.begin(), v.end());
        std::vector<Elem> coeffs(family_size_, 0);
        for (std::size_t k = 0; k < rank_; ++k) {
            Elem lambda = residual[pivots_[k]];
            if (lambda == 0) continue;
            for (std::size_t j = 0; j < dim_; ++j)
                residual[j] = f.sub(residual[j], f.mul(lambda, echelon_(k, j)));
            for (std::size_t i = 0; i < family_size_; ++i)
                coeffs[i] = f.add(coeffs[i], f.mul(lambda, echelon_(k, dim_ + i)));
        }
        for (Elem e : residual)
            if (e != 0) return std::nullopt;
        return coeffs;
    }

   private:
    PrimeField field_{};
    std::size_t dim_ = 0;
    std::size_t rank_ = 0;
    std::size_t family_size_ = 0;
    std::vector<std::size_t> pivots_;
    FpMatrix echelon_;
};

}  // namespace zfilt

#endif  // ZFILT_FP_HPP
