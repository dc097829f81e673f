#pragma once

// Finitely generated abelian groups: exact integer matrices, Smith normal
// form, and canonical invariants of cokernels.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mwrs {

using Integer = boost::multiprecision::cpp_int;

/// Raised when a computation hits a mathematically invalid input
/// (ramified reduction, zero divisor, incompatible pair, ...).
class math_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
            for (long long v : row) data_.emplace_back(v);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    /// Builds a matrix whose columns are the given vectors (all of length rows).
    static IntMatrix from_columns(std::size_t rows, const std::vector<std::vector<Integer>>& cols) {
        IntMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw std::invalid_argument("IntMatrix: column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<Integer> column(std::size_t j) const {
        std::vector<Integer> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    IntMatrix operator*(const IntMatrix& rhs) const {
        if (cols_ != rhs.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch");
        IntMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Integer& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
            }
        return out;
    }

    std::vector<Integer> operator*(const std::vector<Integer>& v) const {
        if (cols_ != v.size()) throw std::invalid_argument("IntMatrix: dimension mismatch");
        std::vector<Integer> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) out[i] += (*this)(i, k) * v[k];
        return out;
    }

    bool operator==(const IntMatrix&) const = default;

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    // row[dst] += f * row[src]
    void add_row(std::size_t dst, std::size_t src, const Integer& f) {
        if (f == 0) return;
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += f * (*this)(src, j);
    }
    void add_col(std::size_t dst, std::size_t src, const Integer& f) {
        if (f == 0) return;
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += f * (*this)(i, src);
    }
    void negate_row(std::size_t r) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(IntMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
    const std::size_t n = m.rows();
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && m(r, k) == 0) ++r;
            if (r == n) return 0;
            m.swap_rows(k, r);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return n == 0 ? Integer(1) : sign * m(n - 1, n - 1);
}

/// Result of smith_normal_form: left * input * right == diag(diagonal).
struct SmithForm {
    std::vector<Integer> diagonal; // min(rows, cols) entries, d_i | d_{i+1}, nonnegative
    IntMatrix left;                // rows x rows, unimodular
    IntMatrix right;               // cols x cols, unimodular
};

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

} // namespace detail

inline SmithForm smith_normal_form(const IntMatrix& input) {
    IntMatrix a = input;
    const std::size_t n = a.rows(), m = a.cols();
    IntMatrix u = IntMatrix::identity(n), v = IntMatrix::identity(m);
    const std::size_t k = std::min(n, m);

    for (std::size_t t = 0; t < k; ++t) {
        for (;;) {
            // smallest nonzero |entry| in the trailing block becomes the pivot
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < n; ++i)
                for (std::size_t j = t; j < m; ++j)
                    if (a(i, j) != 0 && (!best || abs(a(i, j)) < abs(a(best->first, best->second))))
                        best = {i, j};
            if (!best) break;
            a.swap_rows(t, best->first);
            u.swap_rows(t, best->first);
            a.swap_cols(t, best->second);
            v.swap_cols(t, best->second);

            bool clean = true;
            for (std::size_t i = t + 1; i < n; ++i) {
                if (a(i, t) == 0) continue;
                Integer q = detail::floor_div(a(i, t), a(t, t));
                a.add_row(i, t, -q);
                u.add_row(i, t, -q);
                if (a(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < m; ++j) {
                if (a(t, j) == 0) continue;
                Integer q = detail::floor_div(a(t, j), a(t, t));
                a.add_col(j, t, -q);
                v.add_col(j, t, -q);
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            // divisibility: pull an offending row into the pivot row
            std::optional<std::size_t> bad;
            for (std::size_t i = t + 1; i < n && !bad; ++i)
                for (std::size_t j = t + 1; j < m; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (!bad) break;
            a.add_row(t, *bad, 1);
            u.add_row(t, *bad, 1);
        }
        if (a(t, t) < 0) {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithForm out{std::vector<Integer>(k), std::move(u), std::move(v)};
    for (std::size_t i = 0; i < k; ++i) out.diagonal[i] = a(i, i);
    return out;
}

/// Canonical invariants: Z^free_rank + Z/d_1 + ... + Z/d_k, d_i >= 2, d_i | d_{i+1}.
struct AbGroupInvariants {
    std::size_t free_rank = 0;
    std::vector<Integer> invariant_factors;

    bool operator==(const AbGroupInvariants&) const = default;

    /// Builds the canonical form of an arbitrary direct sum of cyclic groups
    /// (orders 0 mean Z, 1 is dropped).
    static AbGroupInvariants from_cyclic_orders(const std::vector<Integer>& orders);

    std::string to_string() const {
        std::string s;
        auto append = [&](const std::string& part) { s += s.empty() ? part : " + " + part; };
        if (free_rank == 1) append("Z");
        else if (free_rank > 1) append("Z^" + std::to_string(free_rank));
        for (const auto& d : invariant_factors) append("Z/" + d.str());
        return s.empty() ? "0" : s;
    }
};

/// Z^generator_count / (column span of relations).
struct AbGroupPresentation {
    std::size_t generator_count = 0;
    IntMatrix relations; // generator_count x (number of relations)
};

inline AbGroupInvariants cokernel_invariants(const AbGroupPresentation& p) {
    if (p.relations.rows() != p.generator_count && p.relations.cols() != 0)
        throw std::invalid_argument("cokernel_invariants: relation rows != generator count");
    AbGroupInvariants inv;
    if (p.relations.cols() == 0) {
        inv.free_rank = p.generator_count;
        return inv;
    }
    const SmithForm snf = smith_normal_form(p.relations);
    std::size_t rank = 0;
    for (const auto& d : snf.diagonal) {
        if (d == 0) continue;
        ++rank;
        if (d > 1) inv.invariant_factors.push_back(d);
    }
    inv.free_rank = p.generator_count - rank;
    return inv;
}

inline AbGroupInvariants AbGroupInvariants::from_cyclic_orders(const std::vector<Integer>& orders) {
    AbGroupPresentation p{orders.size(), IntMatrix(orders.size(), orders.size())};
    for (std::size_t i = 0; i < orders.size(); ++i) p.relations(i, i) = orders[i];
    return cokernel_invariants(p);
}

inline bool groups_isomorphic(const AbGroupInvariants& a, const AbGroupInvariants& b) { return a == b; }

/// Extended gcd: returns (g, x, y) with g = x*a + y*b, g >= 0.
inline std::tuple<Integer, Integer, Integer> xgcd(const Integer& a, const Integer& b) {
    Integer r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        Integer q = r0 / r1;
        Integer tmp = r0 - q * r1;
        r0 = r1, r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1, s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1, t1 = tmp;
    }
    if (r0 < 0) return {-r0, -s0, -t0};
    return {r0, s0, t0};
}

/// Sublattice of Z^n kept in row-echelon (Hermite) form, built incrementally.
/// Used for relation spans too large to hold as a dense matrix.
class Lattice {
  public:
    explicit Lattice(std::size_t dim = 0) : dim_(dim), rows_(dim) {}

    std::size_t dimension() const noexcept { return dim_; }

    std::size_t rank() const noexcept {
        return static_cast<std::size_t>(
            std::count_if(rows_.begin(), rows_.end(), [](const auto& r) { return !r.empty(); }));
    }

    void insert(std::vector<Integer> v) {
        if (v.size() != dim_) throw std::invalid_argument("Lattice: vector dimension mismatch");
        for (std::size_t i = 0; i < dim_; ++i) {
            if (v[i] == 0) continue;
            auto& b = rows_[i];
            if (b.empty()) {
                if (v[i] < 0)
                    for (std::size_t j = i; j < dim_; ++j) v[j] = -v[j];
                reduce_tail(v, i);
                b = std::move(v);
                return;
            }
            if (v[i] % b[i] == 0) {
                Integer q = v[i] / b[i];
                for (std::size_t j = i; j < dim_; ++j) v[j] -= q * b[j];
                continue;
            }
            auto [g, x, y] = xgcd(b[i], v[i]);
            Integer bi = b[i] / g, vi = v[i] / g;
            for (std::size_t j = i; j < dim_; ++j) {
                Integer nb = x * b[j] + y * v[j];
                v[j] = bi * v[j] - vi * b[j];
                b[j] = std::move(nb);
            }
            reduce_tail(b, i);
        }
    }

    bool contains(std::vector<Integer> v) const {
        if (v.size() != dim_) throw std::invalid_argument("Lattice: vector dimension mismatch");
        for (std::size_t i = 0; i < dim_; ++i) {
            if (v[i] == 0) continue;
            const auto& b = rows_[i];
            if (b.empty() || v[i] % b[i] != 0) return false;
            Integer q = v[i] / b[i];
            for (std::size_t j = i; j < dim_; ++j) v[j] -= q * b[j];
        }
        return true;
    }

    /// Basis vectors, ordered by pivot position.
    std::vector<std::vector<Integer>> basis() const {
        std::vector<std::vector<Integer>> out;
        for (const auto& r : rows_)
            if (!r.empty()) out.push_back(r);
        return out;
    }

    IntMatrix basis_matrix() const { return IntMatrix::from_columns(dim_, basis()); }

  private:
    // reduce entries after the pivot by later pivots, keeping coefficients small
    void reduce_tail(std::vector<Integer>& v, std::size_t pivot) const {
        for (std::size_t j = pivot + 1; j < dim_; ++j) {
            const auto& b = rows_[j];
            if (b.empty() || v[j] == 0) continue;
            Integer q = detail::floor_div(v[j], b[j]);
            if (q == 0) continue;
            for (std::size_t k = j; k < dim_; ++k) v[k] -= q * b[k];
        }
    }

    std::size_t dim_;
    std::vector<std::vector<Integer>> rows_; // rows_[i] has pivot at i, or is empty
};

/// Integer kernel {x : m x = 0} as a basis (columns of the returned matrix).
inline IntMatrix integer_kernel(const IntMatrix& m) {
    const SmithForm snf = smith_normal_form(m);
    std::size_t rank = 0;
    for (const auto& d : snf.diagonal)
        if (d != 0) ++rank;
    IntMatrix ker(m.cols(), m.cols() - rank);
    for (std::size_t j = rank; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.cols(); ++i) ker(i, j - rank) = snf.right(i, j);
    // echelonize for small, reproducible coordinates
    Lattice lat(m.cols());
    for (std::size_t j = 0; j < ker.cols(); ++j) lat.insert(ker.column(j));
    return lat.basis_matrix();
}

/// Invariants of the quotient L / M of lattices M <= L <= Z^n given by bases
/// (columns). Throws if M is not contained in L.
inline AbGroupInvariants quotient_invariants(const IntMatrix& big, const IntMatrix& small) {
    const std::size_t k = big.cols();
    if (k == 0) {
        for (std::size_t j = 0; j < small.cols(); ++j)
            for (std::size_t i = 0; i < small.rows(); ++i)
                if (small(i, j) != 0) throw math_error("quotient_invariants: sublattice not contained");
        return {};
    }
    const SmithForm snf = smith_normal_form(big);
    for (std::size_t i = 0; i < k; ++i)
        if (snf.diagonal[i] == 0) throw std::invalid_argument("quotient_invariants: basis not independent");
    // big = L^-1 [D;0] R^-1, so coordinates x of a vector w solve x = R D^-1 (L w)_top
    IntMatrix coords(k, small.cols());
    const IntMatrix lw = snf.left * small;
    for (std::size_t j = 0; j < small.cols(); ++j) {
        std::vector<Integer> y(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (lw(i, j) % snf.diagonal[i] != 0) throw math_error("quotient_invariants: sublattice not contained");
            y[i] = lw(i, j) / snf.diagonal[i];
        }
        for (std::size_t i = k; i < lw.rows(); ++i)
            if (lw(i, j) != 0) throw math_error("quotient_invariants: sublattice not contained");
        auto x = snf.right * y;
        for (std::size_t i = 0; i < k; ++i) coords(i, j) = x[i];
    }
    return cokernel_invariants({k, coords});
}

/// Coordinates of elements of a cokernel Z^n / span(relations) in the canonical
/// decomposition: one entry per invariant factor (reduced mod d), then one per
/// free summand.
class CokernelCoordinates {
  public:
    explicit CokernelCoordinates(const IntMatrix& relations) : n_(relations.rows()) {
        if (relations.cols() == 0) {
            left_ = IntMatrix::identity(n_);
            return;
        }
        SmithForm snf = smith_normal_form(relations);
        left_ = std::move(snf.left);
        diag_ = std::move(snf.diagonal);
    }

    std::vector<Integer> operator()(const std::vector<Integer>& v) const {
        auto y = left_ * v;
        std::vector<Integer> out;
        for (std::size_t i = 0; i < n_; ++i) {
            const Integer d = i < diag_.size() ? diag_[i] : Integer(0);
            if (d == 1) continue;
            if (d == 0) out.push_back(y[i]);
            else {
                Integer r = y[i] % d;
                if (r < 0) r += d;
                out.push_back(r);
            }
        }
        return out;
    }

    /// Order of each output coordinate (0 for a Z coordinate).
    std::vector<Integer> orders() const {
        std::vector<Integer> out;
        for (std::size_t i = 0; i < n_; ++i) {
            const Integer d = i < diag_.size() ? diag_[i] : Integer(0);
            if (d != 1) out.push_back(d);
        }
        return out;
    }

  private:
    std::size_t n_;
    IntMatrix left_;
    std::vector<Integer> diag_;
};

} // namespace mwrs
