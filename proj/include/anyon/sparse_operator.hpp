#pragma once

#include "anyon/types.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <map>
#include <memory>
#include <string>
#include <vector>
#include <set>
#include <utility>

namespace anyon {

class FusionTreeBasis;

/// Complex sparse matrix over a fusion-tree basis.
///
/// Entries with magnitude at or below kDropTolerance are pruned after every
/// arithmetic operation.
class SparseOperator {
public:
    using Matrix = Eigen::SparseMatrix<Complex>;

    explicit SparseOperator(std::shared_ptr<const FusionTreeBasis> basis);
    SparseOperator(std::shared_ptr<const FusionTreeBasis> basis, Matrix matrix);
    SparseOperator(std::shared_ptr<const FusionTreeBasis> basis, const Eigen::MatrixXcd& dense);

    static SparseOperator identity(std::shared_ptr<const FusionTreeBasis> basis);

    const std::shared_ptr<const FusionTreeBasis>& basis() const { return basis_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }
    const Matrix& matrix() const { return matrix_; }
    Complex coeff(int row, int col) const { return matrix_.coeff(row, col); }
    long nonzeros() const { return matrix_.nonZeros(); }

    SparseOperator adjoint() const;
    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }
    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return matrix_ * v; }

    /// Largest entry magnitude.
    double max_abs() const;
    bool is_zero(double tol = kDefaultTolerance) const { return max_abs() <= tol; }
    bool is_hermitian(double tol = kDefaultTolerance) const;

    /// (total charge of row state, total charge of column state) pairs with
    /// nonzero support.
    std::set<std::pair<int, int>> sector_pairs() const;
    bool is_charge_block_diagonal() const;

    SparseOperator& operator+=(const SparseOperator& o);
    SparseOperator& operator-=(const SparseOperator& o);
    SparseOperator& operator*=(Complex s);

    friend SparseOperator operator+(SparseOperator a, const SparseOperator& b) { return a += b; }
    friend SparseOperator operator-(SparseOperator a, const SparseOperator& b) { return a -= b; }
    friend SparseOperator operator*(SparseOperator a, Complex s) { return a *= s; }
    friend SparseOperator operator*(Complex s, SparseOperator a) { return a *= s; }
    friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);

private:
    void check_same(const SparseOperator& o) const;
    void prune();

    std::shared_ptr<const FusionTreeBasis> basis_;
    Matrix matrix_;
};

/// max |a - b| entrywise.
double max_abs_diff(const SparseOperator& a, const SparseOperator& b);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b);

/// Prunes |v| <= kDropTolerance in place.
void prune_matrix(SparseOperator::Matrix& m);

/// Coordinate-triplet text: one "# basis ..." header naming model, modes,
/// sector, shape and ordering version, then "row col re im" lines.
std::string to_triplets(const SparseOperator& op);

struct TripletData {
    std::map<std::string, std::string> header;
    std::vector<Eigen::Triplet<Complex>> entries;
};

/// Parses triplet text; throws ArgumentError on malformed lines.
TripletData parse_triplets(const std::string& text);

/// Builds an operator from parsed triplets after checking the header
/// against `basis`.
SparseOperator from_triplets(const TripletData& data, std::shared_ptr<const FusionTreeBasis> basis);

} // namespace anyon
