#pragma once

#include "anyon/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace anyon {

/// How rung edges are read. `paper` takes the printed sum (i, 2N-i);
/// `geometric` joins vertically adjacent sites of the snake layout,
/// (i, 2N+1-i).
enum class RungIndexing { paper, geometric };

RungIndexing parse_indexing(const std::string& text);
std::string to_string(RungIndexing indexing);

struct LatticeEdge {
    enum class Kind { chain, rung };
    int i = 0;
    int j = 0;
    Kind kind = Kind::chain;

    bool operator==(const LatticeEdge&) const = default;
};

/// 2 x N ladder. Snake ordering: the top row is modes 1..N left to right,
/// the bottom row continues right to left, so site (1, c) is mode 2N+1-c.
struct LatticeSpec {
    int rungs = 0;
    RungIndexing indexing = RungIndexing::geometric;
    std::vector<LatticeEdge> edges;

    int n_modes() const { return 2 * rungs; }
    /// Mode of (row, col), both 0-based.
    int mode_at(int row, int col) const;
    std::string to_json() const;
};

LatticeSpec build_lattice(int rungs, RungIndexing indexing = RungIndexing::geometric);

struct HubbardParams {
    double t = 1.0;
    double mu = 0.0;
};

/// -mu sum n_i - t sum_edges (alpha_j+ alpha_i + beta_j+ beta_i) + h.c. of
/// the hopping terms, written in the unnormalised Fibonacci pair.
LadderPolynomial hamiltonian_polynomial(const LatticeSpec& spec, const HubbardParams& params);

/// alpha_k and beta_k rewritten in the normalised alpha^{(0)}, alpha^{(1)}
/// of particle tau.
std::pair<LadderPolynomial, LadderPolynomial> fibonacci_pair_polynomials(Charge tau, int k);

/// Replaces alpha/beta symbols by their normalised expressions.
LadderPolynomial expand_fibonacci_pair(const LadderPolynomial& p, Charge tau);

/// Direct sparse assembly from fibonacci_pair operators.
SparseOperator build_hamiltonian(const LadderSet& set, const LatticeSpec& spec, const HubbardParams& params);

enum class DiagMethod { automatic, dense, iterative };

struct Spectrum {
    Charge sector = 0;
    int dimension = 0;
    std::string method;
    std::vector<double> eigenvalues;  // ascending
    /// Lowest eigenvector embedded in the full basis.
    std::optional<Eigen::VectorXcd> ground_state;
};

inline constexpr int kDenseLimit = 2048;

/// Eigenvalues of the Hermitian block of H on total charge `sector`. Dense
/// solves return every eigenvalue; the iterative path returns the lowest
/// `n_lowest`. Throws ArgumentError if H is not Hermitian within `tol`.
Spectrum diagonalize(const SparseOperator& h, Charge sector, DiagMethod method = DiagMethod::automatic,
                     int n_lowest = 8, double tol = 1e-9);

/// <n_i> per mode, n_i = alpha_i+ alpha_i + beta_i+ beta_i. An
/// unnormalised state is rescaled and `rescaled` set.
std::vector<double> occupation_profile(const LadderSet& set, const Eigen::VectorXcd& state, bool* rescaled = nullptr);

/// "sector,index,eigenvalue" rows.
std::string spectrum_csv(const AnyonModel& model, const std::vector<Spectrum>& spectra);
/// "mode,density" rows.
std::string occupation_csv(const std::vector<double>& densities);

} // namespace anyon
