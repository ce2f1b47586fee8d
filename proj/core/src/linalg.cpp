#include "qtel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qtel/error.hpp"

namespace qtel {

ComplexVec ComplexVec::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw DimensionMismatch("basis index " + std::to_string(index) + " out of range for dim " +
                                std::to_string(dim));
    }
    ComplexVec v(dim);
    v[index] = 1.0;
    return v;
}

double ComplexVec::norm_squared() const {
    double acc = 0.0;
    for (const auto& z : entries_) acc += std::norm(z);
    return acc;
}

double ComplexVec::norm() const { return std::sqrt(norm_squared()); }

bool ComplexVec::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

ComplexVec ComplexVec::normalized() const {
    const double n = norm();
    if (n == 0.0) throw InvalidInput("cannot normalize the zero vector");
    ComplexVec out(*this);
    for (auto& z : out.entries_) z /= n;
    return out;
}

ComplexVec& ComplexVec::operator+=(const ComplexVec& other) {
    if (other.dim() != dim()) throw DimensionMismatch("vector sum of unequal dimensions");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexVec& ComplexVec::operator-=(const ComplexVec& other) {
    if (other.dim() != dim()) throw DimensionMismatch("vector difference of unequal dimensions");
    for (std::size_t i = 0; i < dim(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexVec& ComplexVec::operator*=(Complex scale) {
    for (auto& z : entries_) z *= scale;
    return *this;
}

ComplexVec operator+(ComplexVec a, const ComplexVec& b) { return a += b; }
ComplexVec operator-(ComplexVec a, const ComplexVec& b) { return a -= b; }
ComplexVec operator*(Complex scale, ComplexVec v) { return v *= scale; }

Complex inner(const ComplexVec& a, const ComplexVec& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("inner product of unequal dimensions");
    Complex acc = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double max_abs_diff(const ComplexVec& a, const ComplexVec& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("comparing vectors of unequal dimensions");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

ComplexVec tensor(const ComplexVec& a, const ComplexVec& b) {
    ComplexVec out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) out[i * b.dim() + j] = a[i] * b[j];
    }
    return out;
}

ComplexMat ComplexMat::identity(std::size_t n) {
    ComplexMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMat ComplexMat::roots_of_unity(std::size_t n) {
    ComplexMat m(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            // Reduce k k' mod n before scaling so large products keep full precision.
            const std::size_t phase_index = ((a + 1) * (b + 1)) % n;
            m(a, b) = std::polar(1.0, 2.0 * M_PI * static_cast<double>(phase_index) / static_cast<double>(n));
        }
    }
    return m;
}

ComplexMat ComplexMat::from_columns(std::span<const ComplexVec> columns) {
    if (columns.empty()) return {};
    ComplexMat m(columns.front().dim(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].dim() != m.rows()) throw DimensionMismatch("ragged column set");
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = columns[c][r];
    }
    return m;
}

ComplexMat ComplexMat::outer(const ComplexVec& ket, const ComplexVec& bra) {
    ComplexMat m(ket.dim(), bra.dim());
    for (std::size_t r = 0; r < ket.dim(); ++r) {
        for (std::size_t c = 0; c < bra.dim(); ++c) m(r, c) = ket[r] * std::conj(bra[c]);
    }
    return m;
}

ComplexVec ComplexMat::column(std::size_t c) const {
    ComplexVec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

ComplexMat ComplexMat::adjoint() const {
    ComplexMat out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    }
    return out;
}

ComplexMat& ComplexMat::operator+=(const ComplexMat& other) {
    if (other.rows_ != rows_ || other.cols_ != cols_) throw DimensionMismatch("matrix sum of unequal shapes");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMat operator*(const ComplexMat& a, const ComplexMat& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product of incompatible shapes");
    ComplexMat out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexVec operator*(const ComplexMat& m, const ComplexVec& v) {
    if (m.cols() != v.dim()) throw DimensionMismatch("matrix-vector product of incompatible shapes");
    ComplexVec out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex acc = 0.0;
        for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

ComplexMat kron(const ComplexMat& a, const ComplexMat& b) {
    ComplexMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

double max_abs_diff(const ComplexMat& a, const ComplexMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("comparing matrices of unequal shapes");
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    return worst;
}

double unitarity_defect(const ComplexMat& u) {
    if (u.rows() != u.cols()) throw DimensionMismatch("unitarity check on a non-square matrix");
    return max_abs_diff(u.adjoint() * u, ComplexMat::identity(u.rows()));
}

namespace {

void check_shape(const ComplexVec& state, BipartiteShape shape) {
    if (shape.dimA == 0 || shape.dimB == 0 || state.dim() != shape.total()) {
        throw ShapeMismatch("state of dim " + std::to_string(state.dim()) + " does not fit shape " +
                            std::to_string(shape.dimA) + "x" + std::to_string(shape.dimB));
    }
}

}  // namespace

ComplexMat reshape(const ComplexVec& state, BipartiteShape shape) {
    check_shape(state, shape);
    ComplexMat m(shape.dimA, shape.dimB);
    for (std::size_t i = 0; i < shape.dimA; ++i)
        for (std::size_t j = 0; j < shape.dimB; ++j) m(i, j) = state[i * shape.dimB + j];
    return m;
}

ComplexMat partial_trace_b(const ComplexVec& state, BipartiteShape shape) {
    const ComplexMat c = reshape(state, shape);
    return c * c.adjoint();
}

ComplexMat partial_trace_a(const ComplexVec& state, BipartiteShape shape) {
    // rho_B = (C^T)(C^T)^dagger, i.e. rho_B(j, j') = sum_i C(i, j) conj(C(i, j'))
    const ComplexMat c = reshape(state, shape);
    ComplexMat rho(shape.dimB, shape.dimB);
    for (std::size_t j = 0; j < shape.dimB; ++j)
        for (std::size_t jp = 0; jp < shape.dimB; ++jp) {
            Complex acc = 0.0;
            for (std::size_t i = 0; i < shape.dimA; ++i) acc += c(i, j) * std::conj(c(i, jp));
            rho(j, jp) = acc;
        }
    return rho;
}

ComplexVec permute_subsystems(const ComplexVec& state, std::span<const std::size_t> dims,
                              std::span<const std::size_t> perm) {
    const std::size_t count = dims.size();
    if (perm.size() != count) throw DimensionMismatch("permutation length differs from subsystem count");
    std::vector<bool> seen(count, false);
    for (auto p : perm) {
        if (p >= count || seen[p]) throw DimensionMismatch("not a permutation of the subsystems");
        seen[p] = true;
    }
    const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (total != state.dim()) throw DimensionMismatch("subsystem dimensions do not multiply to the state dim");

    std::vector<std::size_t> in_stride(count, 1);
    for (std::size_t i = count; i-- > 1;) in_stride[i - 1] = in_stride[i] * dims[i];

    ComplexVec out(total);
    std::vector<std::size_t> digits(count, 0);  // output multi-index
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t src = 0;
        for (std::size_t i = 0; i < count; ++i) src += digits[i] * in_stride[perm[i]];
        out[flat] = state[src];
        for (std::size_t i = count; i-- > 0;) {
            if (++digits[i] < dims[perm[i]]) break;
            digits[i] = 0;
        }
    }
    return out;
}

Svd svd(const ComplexMat& a, double drop_below) {
    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    // Wide matrices converge faster on the adjoint; swap and swap back.
    if (cols > rows) {
        Svd t = svd(a.adjoint(), drop_below);
        return {std::move(t.v), std::move(t.singular), std::move(t.u)};
    }

    ComplexMat w = a;
    ComplexMat v = ComplexMat::identity(cols);
    constexpr int kMaxSweeps = 80;
    constexpr double kEps = 1e-15;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                double alpha = 0.0;
                double beta = 0.0;
                Complex gamma = 0.0;
                for (std::size_t r = 0; r < rows; ++r) {
                    alpha += std::norm(w(r, p));
                    beta += std::norm(w(r, q));
                    gamma += std::conj(w(r, p)) * w(r, q);
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= kEps * std::sqrt(alpha * beta)) continue;
                rotated = true;

                // Rotate column q by the phase of gamma so the pair is real-coupled,
                // then apply the real Jacobi rotation that zeroes the coupling.
                const Complex phase = std::conj(gamma) / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                for (std::size_t r = 0; r < rows; ++r) {
                    const Complex wp = w(r, p);
                    const Complex wq = w(r, q) * phase;
                    w(r, p) = c * wp - s * wq;
                    w(r, q) = s * wp + c * wq;
                }
                for (std::size_t r = 0; r < cols; ++r) {
                    const Complex vp = v(r, p);
                    const Complex vq = v(r, q) * phase;
                    v(r, p) = c * vp - s * vq;
                    v(r, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(cols);
    for (std::size_t c = 0; c < cols; ++c) sigma[c] = w.column(c).norm();
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    std::size_t rank = 0;
    while (rank < cols && sigma[order[rank]] > drop_below && sigma[order[rank]] > 0.0) ++rank;

    Svd out{ComplexMat(rows, rank), std::vector<double>(rank), ComplexMat(cols, rank)};
    for (std::size_t k = 0; k < rank; ++k) {
        const std::size_t src = order[k];
        out.singular[k] = sigma[src];
        for (std::size_t r = 0; r < rows; ++r) out.u(r, k) = w(r, src) / sigma[src];
        for (std::size_t r = 0; r < cols; ++r) out.v(r, k) = v(r, src);
    }
    return out;
}

ComplexVec SchmidtDecomposition::reconstruct() const {
    if (probs.empty()) return {};
    ComplexVec out(basesA.front().dim() * basesB.front().dim());
    for (std::size_t k = 0; k < probs.size(); ++k) out += std::sqrt(probs[k]) * tensor(basesA[k], basesB[k]);
    return out;
}

SchmidtDecomposition schmidt_decompose(const ComplexVec& state, BipartiteShape shape) {
    // state = sum_ij C_ij |i>|j> = sum_k s_k U_k (x) conj(V_k)
    const Svd d = svd(reshape(state, shape), std::sqrt(kRankThreshold));
    SchmidtDecomposition out;
    out.probs.reserve(d.singular.size());
    for (std::size_t k = 0; k < d.singular.size(); ++k) {
        out.probs.push_back(d.singular[k] * d.singular[k]);
        out.basesA.push_back(d.u.column(k));
        ComplexVec b = d.v.column(k);
        for (auto& z : b.entries()) z = std::conj(z);
        out.basesB.push_back(std::move(b));
    }
    return out;
}

std::size_t schmidt_number(const ComplexVec& state, BipartiteShape shape) {
    return schmidt_decompose(state, shape).probs.size();
}

}  // namespace qtel
