#include "anyon/hubbard.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace anyon {

RungIndexing parse_indexing(const std::string& text)
{
    if (text == "paper")
        return RungIndexing::paper;
    if (text == "geometric")
        return RungIndexing::geometric;
    throw ArgumentError("indexing must be 'paper' or 'geometric', got '" + text + "'");
}

std::string to_string(RungIndexing indexing) { return indexing == RungIndexing::paper ? "paper" : "geometric"; }

int LatticeSpec::mode_at(int row, int col) const
{
    if (row < 0 || row > 1 || col < 0 || col >= rungs)
        throw ArgumentError("lattice site out of range");
    return row == 0 ? col + 1 : 2 * rungs - col;
}

std::string LatticeSpec::to_json() const
{
    nlohmann::json doc;
    doc["rungs"] = rungs;
    doc["modes"] = n_modes();
    doc["indexing"] = to_string(indexing);
    doc["ordering"] = nlohmann::json::array();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < rungs; ++c)
            doc["ordering"].push_back({{"row", r}, {"col", c}, {"mode", mode_at(r, c)}});
    doc["edges"] = nlohmann::json::array();
    for (const auto& e : edges)
        doc["edges"].push_back({{"i", e.i}, {"j", e.j}, {"kind", e.kind == LatticeEdge::Kind::chain ? "chain" : "rung"}});
    return doc.dump(2);
}

LatticeSpec build_lattice(int rungs, RungIndexing indexing)
{
    if (rungs < 1)
        throw ArgumentError("a 2 x N lattice needs N >= 1");
    LatticeSpec spec{rungs, indexing, {}};
    const int n = 2 * rungs;
    for (int i = 1; i < n; ++i)
        spec.edges.push_back({i, i + 1, LatticeEdge::Kind::chain});
    for (int i = 1; i <= rungs - 1; ++i) {
        const int j = indexing == RungIndexing::paper ? n - i : n + 1 - i;
        spec.edges.push_back({i, j, LatticeEdge::Kind::rung});
    }
    return spec;
}

// ------------------------------------------------------------ Hamiltonian

namespace {

LadderPolynomial gen(Generator g) { return LadderPolynomial::of(g); }

} // namespace

LadderPolynomial hamiltonian_polynomial(const LatticeSpec& spec, const HubbardParams& params)
{
    LadderPolynomial h;
    for (int i = 1; i <= spec.n_modes(); ++i) {
        h += gen(Generator::alpha(i, true)) * gen(Generator::alpha(i)) * Complex(-params.mu);
        h += gen(Generator::beta(i, true)) * gen(Generator::beta(i)) * Complex(-params.mu);
    }
    LadderPolynomial hop;
    for (const auto& e : spec.edges) {
        hop += gen(Generator::alpha(e.j, true)) * gen(Generator::alpha(e.i));
        hop += gen(Generator::beta(e.j, true)) * gen(Generator::beta(e.i));
    }
    hop *= Complex(-params.t);
    return h + hop + hop.adjoint();
}

std::pair<LadderPolynomial, LadderPolynomial> fibonacci_pair_polynomials(Charge tau, int k)
{
    const double s = 1.0 / std::sqrt(2.0);
    auto a0 = gen(Generator::ladder(tau, k, 0));
    auto a1 = gen(Generator::ladder(tau, k, 1));
    auto e_tau = a1 * gen(Generator::ladder(tau, k, 0, true)) * a0;  // tau^{e,tau}
    auto alpha = e_tau * Complex(s) + a0 - e_tau;
    auto beta = e_tau * Complex(s) + a1 - e_tau;
    return {alpha, beta};
}

LadderPolynomial expand_fibonacci_pair(const LadderPolynomial& p, Charge tau)
{
    LadderPolynomial out;
    for (const auto& t : p.terms()) {
        auto prod = LadderPolynomial::constant(t.coeff);
        for (const auto& g : t.word) {
            if (g.kind == Generator::Kind::ladder) {
                prod = prod * gen(g);
                continue;
            }
            auto [al, be] = fibonacci_pair_polynomials(tau, g.mode);
            auto x = g.kind == Generator::Kind::alpha ? al : be;
            prod = prod * (g.dagger ? x.adjoint() : x);
        }
        out += prod;
    }
    return out;
}

SparseOperator build_hamiltonian(const LadderSet& set, const LatticeSpec& spec, const HubbardParams& params)
{
    if (set.n_modes() != spec.n_modes())
        throw ArgumentError("ladder set has " + std::to_string(set.n_modes()) + " modes, lattice needs " +
                            std::to_string(spec.n_modes()));
    std::vector<SparseOperator> alpha, beta;
    for (int k = 1; k <= set.n_modes(); ++k) {
        auto [a, b] = fibonacci_pair(set, k);
        alpha.push_back(std::move(a));
        beta.push_back(std::move(b));
    }
    SparseOperator h(set.basis());
    for (int i = 0; i < set.n_modes(); ++i)
        h += (alpha[i].adjoint() * alpha[i] + beta[i].adjoint() * beta[i]) * Complex(-params.mu);
    SparseOperator hop(set.basis());
    for (const auto& e : spec.edges)
        hop += alpha[e.j - 1].adjoint() * alpha[e.i - 1] + beta[e.j - 1].adjoint() * beta[e.i - 1];
    hop *= Complex(-params.t);
    return h + hop + hop.adjoint();
}

// --------------------------------------------------------- diagonalization

namespace {

// Lanczos with full reorthogonalisation; fine for the few lowest states.
std::pair<std::vector<double>, Eigen::VectorXcd> lanczos(const SparseOperator::Matrix& a, int n_lowest)
{
    const Eigen::Index n = a.rows();
    const Eigen::Index m = std::min<Eigen::Index>(n, std::max(4 * n_lowest + 40, 120));
    Eigen::MatrixXcd v(n, m);
    std::vector<double> alpha, beta;
    std::mt19937 rng(12345);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd q(n);
    for (Eigen::Index i = 0; i < n; ++i)
        q(i) = Complex(nd(rng), nd(rng));
    q.normalize();
    Eigen::Index steps = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
        v.col(j) = q;
        ++steps;
        Eigen::VectorXcd w = a * q;
        alpha.push_back(q.dot(w).real());
        for (int pass = 0; pass < 2; ++pass)
            w -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * w);
        const double b = w.norm();
        if (b < 1e-12 || j + 1 == m)
            break;
        beta.push_back(b);
        q = w / b;
    }
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(steps, steps);
    for (Eigen::Index i = 0; i < steps; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < steps)
            t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    std::vector<double> vals;
    for (Eigen::Index i = 0; i < std::min<Eigen::Index>(steps, n_lowest); ++i)
        vals.push_back(es.eigenvalues()(i));
    Eigen::VectorXcd ground = v.leftCols(steps) * es.eigenvectors().col(0).cast<Complex>();
    return {vals, ground.normalized()};
}

} // namespace

Spectrum diagonalize(const SparseOperator& h, Charge sector, DiagMethod method, int n_lowest, double tol)
{
    const auto& basis = *h.basis();
    if (sector < 0 || sector >= basis.model().num_types())
        throw ArgumentError("sector charge out of range");
    if (!h.is_hermitian(tol))
        throw ArgumentError("Hamiltonian is not Hermitian within tolerance");
    std::vector<int> idx;
    for (int i = 0; i < basis.dim(); ++i)
        if (basis.state(i).total == sector)
            idx.push_back(i);
    Spectrum out;
    out.sector = sector;
    out.dimension = static_cast<int>(idx.size());
    if (idx.empty()) {
        out.method = "empty";
        return out;
    }
    std::vector<int> pos(basis.dim(), -1);
    for (size_t k = 0; k < idx.size(); ++k)
        pos[idx[k]] = static_cast<int>(k);
    std::vector<Eigen::Triplet<Complex>> trips;
    const auto& m = h.matrix();
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(m, k); it; ++it)
            if (pos[it.row()] >= 0 && pos[it.col()] >= 0)
                trips.emplace_back(pos[it.row()], pos[it.col()], it.value());
    SparseOperator::Matrix block(out.dimension, out.dimension);
    block.setFromTriplets(trips.begin(), trips.end());

    const bool dense = method == DiagMethod::dense || (method == DiagMethod::automatic && out.dimension <= kDenseLimit);
    Eigen::VectorXcd ground;
    if (dense) {
        out.method = "dense";
        Eigen::MatrixXcd d(block);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(d);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            out.eigenvalues.push_back(es.eigenvalues()(i));
        ground = es.eigenvectors().col(0);
    } else {
        out.method = "lanczos";
        auto [vals, g] = lanczos(block, n_lowest);
        out.eigenvalues = vals;
        ground = g;
    }
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(basis.dim());
    for (size_t k = 0; k < idx.size(); ++k)
        full(idx[k]) = ground(static_cast<Eigen::Index>(k));
    out.ground_state = full;
    return out;
}

std::vector<double> occupation_profile(const LadderSet& set, const Eigen::VectorXcd& state, bool* rescaled)
{
    if (state.size() != set.basis()->dim())
        throw ArgumentError("state dimension does not match the basis");
    const double nrm = state.norm();
    if (nrm == 0.0)
        throw ArgumentError("zero state has no occupation profile");
    const bool off = std::abs(nrm - 1.0) > 1e-10;
    if (rescaled)
        *rescaled = off;
    Eigen::VectorXcd psi = state / nrm;
    std::vector<double> out;
    for (int k = 1; k <= set.n_modes(); ++k) {
        auto [a, b] = fibonacci_pair(set, k);
        auto n = a.adjoint() * a + b.adjoint() * b;
        out.push_back(psi.dot(n.apply(psi)).real());
    }
    return out;
}

std::string spectrum_csv(const AnyonModel& model, const std::vector<Spectrum>& spectra)
{
    std::ostringstream os;
    os.precision(15);
    os << "sector,index,eigenvalue\n";
    for (const auto& s : spectra)
        for (size_t i = 0; i < s.eigenvalues.size(); ++i)
            os << model.label(s.sector) << "," << i << "," << s.eigenvalues[i] << "\n";
    return os.str();
}

std::string occupation_csv(const std::vector<double>& densities)
{
    std::ostringstream os;
    os.precision(15);
    os << "mode,density\n";
    for (size_t i = 0; i < densities.size(); ++i)
        os << i + 1 << "," << densities[i] << "\n";
    return os.str();
}

} // namespace anyon
