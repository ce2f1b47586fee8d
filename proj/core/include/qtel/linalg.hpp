#pragma once

// Dense complex vectors and matrices sized for desk-scale quantum states.
//
// Composite-system index convention: the first subsystem is the most
// significant digit. A vector over systems with dimensions (d1, d2, d3)
// stores amplitude <i1 i2 i3|v> at index (i1 * d2 + i2) * d3 + i3.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qtel {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-12;
// A singular value sigma counts toward the Schmidt rank iff sigma^2 > this.
inline constexpr double kRankThreshold = 1e-10;

class ComplexVec {
public:
    ComplexVec() = default;
    explicit ComplexVec(std::size_t dim) : entries_(dim) {}
    explicit ComplexVec(std::vector<Complex> entries) : entries_(std::move(entries)) {}
    ComplexVec(std::initializer_list<Complex> entries) : entries_(entries) {}

    static ComplexVec basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return entries_.size(); }
    Complex& operator[](std::size_t i) { return entries_[i]; }
    const Complex& operator[](std::size_t i) const { return entries_[i]; }

    std::span<const Complex> entries() const noexcept { return entries_; }
    std::span<Complex> entries() noexcept { return entries_; }

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    double norm_squared() const;
    double norm() const;
    bool is_normalized(double tol = kNormTolerance) const;
    // Returns a unit vector; throws InvalidInput for the zero vector.
    ComplexVec normalized() const;

    ComplexVec& operator+=(const ComplexVec& other);
    ComplexVec& operator-=(const ComplexVec& other);
    ComplexVec& operator*=(Complex scale);

    bool operator==(const ComplexVec&) const = default;

private:
    std::vector<Complex> entries_;
};

ComplexVec operator+(ComplexVec a, const ComplexVec& b);
ComplexVec operator-(ComplexVec a, const ComplexVec& b);
ComplexVec operator*(Complex scale, ComplexVec v);

// <a|b>, conjugate-linear in the first argument.
Complex inner(const ComplexVec& a, const ComplexVec& b);
double max_abs_diff(const ComplexVec& a, const ComplexVec& b);

ComplexVec tensor(const ComplexVec& a, const ComplexVec& b);

class ComplexMat {
public:
    ComplexMat() = default;
    ComplexMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static ComplexMat identity(std::size_t n);
    // e_{k,k'} = exp(2 pi i k k' / n) with k, k' running over 1..n; stored
    // 0-based so element (a, b) holds e_{a+1, b+1}.
    static ComplexMat roots_of_unity(std::size_t n);
    static ComplexMat from_columns(std::span<const ComplexVec> columns);
    static ComplexMat outer(const ComplexVec& ket, const ComplexVec& bra);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    ComplexVec column(std::size_t c) const;
    ComplexMat adjoint() const;

    ComplexMat& operator+=(const ComplexMat& other);

    bool operator==(const ComplexMat&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMat operator*(const ComplexMat& a, const ComplexMat& b);
ComplexVec operator*(const ComplexMat& m, const ComplexVec& v);
ComplexMat kron(const ComplexMat& a, const ComplexMat& b);
double max_abs_diff(const ComplexMat& a, const ComplexMat& b);
// max |(U^dagger U - I)_{ij}|
double unitarity_defect(const ComplexMat& u);

struct BipartiteShape {
    std::size_t dimA = 1;
    std::size_t dimB = 1;

    std::size_t total() const noexcept { return dimA * dimB; }
};

// Reshape a bipartite vector into its dimA x dimB coefficient matrix.
ComplexMat reshape(const ComplexVec& state, BipartiteShape shape);

// Reduced density matrices of |state><state|.
ComplexMat partial_trace_b(const ComplexVec& state, BipartiteShape shape);
ComplexMat partial_trace_a(const ComplexVec& state, BipartiteShape shape);

// Reorders the subsystems of a composite vector. Output subsystem i is
// input subsystem perm[i].
ComplexVec permute_subsystems(const ComplexVec& state, std::span<const std::size_t> dims,
                              std::span<const std::size_t> perm);

struct Svd {
    ComplexMat u;                      // rows x rank, orthonormal columns
    std::vector<double> singular;      // descending, length rank
    ComplexMat v;                      // cols x rank, orthonormal columns
};

// Thin SVD by one-sided (Hestenes) Jacobi rotations; A = U diag(s) V^dagger.
// Singular values at or below `drop_below` are discarded from the result.
Svd svd(const ComplexMat& a, double drop_below = 0.0);

struct SchmidtDecomposition {
    std::vector<double> probs;         // squared singular values, descending
    std::vector<ComplexVec> basesA;
    std::vector<ComplexVec> basesB;

    // sum_k sqrt(p_k) |a_k> (x) |b_k>
    ComplexVec reconstruct() const;
};

// Coefficients are real and nonnegative; any phase lives in basesB.
// Terms with p_k <= kRankThreshold are dropped.
SchmidtDecomposition schmidt_decompose(const ComplexVec& state, BipartiteShape shape);
std::size_t schmidt_number(const ComplexVec& state, BipartiteShape shape);

}  // namespace qtel
