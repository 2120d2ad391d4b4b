#include "anyon/sparse_operator.hpp"

#include "anyon/fusion_basis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace anyon {

void prune_matrix(SparseOperator::Matrix& m)
{
    m.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > kDropTolerance; });
}

SparseOperator::SparseOperator(std::shared_ptr<const FusionTreeBasis> basis)
    : basis_(std::move(basis)), matrix_(basis_->dim(), basis_->dim())
{
}

SparseOperator::SparseOperator(std::shared_ptr<const FusionTreeBasis> basis, Matrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix))
{
    if (matrix_.rows() != basis_->dim() || matrix_.cols() != basis_->dim())
        throw ArgumentError("operator shape does not match basis dimension");
    prune();
}

SparseOperator::SparseOperator(std::shared_ptr<const FusionTreeBasis> basis, const Eigen::MatrixXcd& dense)
    : SparseOperator(std::move(basis), Matrix(dense.sparseView(Complex(1.0), kDropTolerance)))
{
}

SparseOperator SparseOperator::identity(std::shared_ptr<const FusionTreeBasis> basis)
{
    Matrix m(basis->dim(), basis->dim());
    m.setIdentity();
    return SparseOperator(std::move(basis), std::move(m));
}

SparseOperator SparseOperator::adjoint() const { return SparseOperator(basis_, Matrix(matrix_.adjoint())); }

double SparseOperator::max_abs() const
{
    double best = 0.0;
    for (int k = 0; k < matrix_.outerSize(); ++k)
        for (Matrix::InnerIterator it(matrix_, k); it; ++it)
            best = std::max(best, std::abs(it.value()));
    return best;
}

bool SparseOperator::is_hermitian(double tol) const { return max_abs_diff(*this, adjoint()) <= tol; }

std::set<std::pair<int, int>> SparseOperator::sector_pairs() const
{
    std::set<std::pair<int, int>> out;
    for (int k = 0; k < matrix_.outerSize(); ++k)
        for (Matrix::InnerIterator it(matrix_, k); it; ++it)
            out.insert({basis_->state(static_cast<int>(it.row())).total, basis_->state(static_cast<int>(it.col())).total});
    return out;
}

bool SparseOperator::is_charge_block_diagonal() const
{
    for (const auto& [g_out, g_in] : sector_pairs())
        if (g_out != g_in)
            return false;
    return true;
}

void SparseOperator::check_same(const SparseOperator& o) const
{
    if (basis_ != o.basis_ && !basis_->same_space(*o.basis_))
        throw ArgumentError("operators live on different bases");
}

void SparseOperator::prune() { prune_matrix(matrix_); }

SparseOperator& SparseOperator::operator+=(const SparseOperator& o)
{
    check_same(o);
    matrix_ += o.matrix_;
    prune();
    return *this;
}

SparseOperator& SparseOperator::operator-=(const SparseOperator& o)
{
    check_same(o);
    matrix_ -= o.matrix_;
    prune();
    return *this;
}

SparseOperator& SparseOperator::operator*=(Complex s)
{
    matrix_ *= s;
    prune();
    return *this;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b)
{
    a.check_same(b);
    return SparseOperator(a.basis_, SparseOperator::Matrix(a.matrix_ * b.matrix_));
}

double max_abs_diff(const SparseOperator& a, const SparseOperator& b)
{
    SparseOperator::Matrix d = a.matrix() - b.matrix();
    double best = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(d, k); it; ++it)
            best = std::max(best, std::abs(it.value()));
    return best;
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) { return a * b - b * a; }

SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b) { return a * b + b * a; }

std::string to_triplets(const SparseOperator& op)
{
    std::ostringstream os;
    os << "# basis " << op.basis()->describe() << "\n";
    os << std::setprecision(17);
    // Row-major order for stable diffs.
    std::vector<Eigen::Triplet<Complex>> trips;
    const auto& m = op.matrix();
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(m, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
        return std::make_pair(a.row(), a.col()) < std::make_pair(b.row(), b.col());
    });
    for (const auto& t : trips)
        os << t.row() << " " << t.col() << " " << t.value().real() << " " << t.value().imag() << "\n";
    return os.str();
}

TripletData parse_triplets(const std::string& text)
{
    TripletData out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string word;
            while (hs >> word) {
                auto eq = word.find('=');
                if (eq != std::string::npos)
                    out.header[word.substr(0, eq)] = word.substr(eq + 1);
            }
            continue;
        }
        std::istringstream ls(line);
        long r, c;
        double re, im;
        if (!(ls >> r >> c >> re >> im) || r < 0 || c < 0)
            throw ArgumentError("malformed triplet on line " + std::to_string(line_no));
        out.entries.emplace_back(static_cast<int>(r), static_cast<int>(c), Complex(re, im));
    }
    return out;
}

SparseOperator from_triplets(const TripletData& data, std::shared_ptr<const FusionTreeBasis> basis)
{
    const std::string want = basis->describe();
    for (const auto& [key, value] : data.header) {
        if (key != "model" && key != "n_modes" && key != "sector" && key != "ordering")
            continue;
        if (want.find(key + "=" + value) == std::string::npos)
            throw ArgumentError("triplet header " + key + "=" + value + " does not match basis (" + want + ")");
    }
    for (const auto& t : data.entries)
        if (t.row() >= basis->dim() || t.col() >= basis->dim())
            throw ArgumentError("triplet index outside the basis");
    SparseOperator::Matrix m(basis->dim(), basis->dim());
    m.setFromTriplets(data.entries.begin(), data.entries.end());
    return SparseOperator(std::move(basis), std::move(m));
}

} // namespace anyon
