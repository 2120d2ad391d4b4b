#pragma once

#include "anyon/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace anyon {

/// A prefix tree on modes 1..M: leaf labels and left-comb internal charges
/// d_1..d_{M-1}; `charge` is d_{M-1} (or the single leaf when M = 1).
struct PrefixTree {
    std::vector<Charge> leaves;
    std::vector<Charge> internal;
    Charge charge = 0;

    bool operator==(const PrefixTree&) const = default;
    auto operator<=>(const PrefixTree&) const = default;
};

/// The canonical basis viewed in the shape (left comb over modes 1..M,
/// left comb over M+1..N). Each shaped state splits into a prefix tree P,
/// a rest tree R with charge h, and a total charge g.
class PrefixFrame {
public:
    PrefixFrame(BasisPtr basis, int m);

    const BasisPtr& basis() const { return basis_; }
    const BasisPtr& shaped() const { return shaped_; }
    int prefix_size() const { return m_; }

    const std::vector<PrefixTree>& prefix_trees() const { return prefixes_; }
    int prefix_index(const PrefixTree& p) const;
    /// Rest charges h with at least one rest tree, label order.
    std::vector<Charge> rest_charges() const;
    int rest_dim(Charge h) const;

    /// Canonical operator sum_R |P,R;g><P',R;g'| over rest trees of charge h.
    SparseOperator unit(int p, int p2, Charge h, Charge g, Charge g2) const;
    /// Canonical operator sum_R |0,R;h><P,R;g|: annihilates the prefix P.
    SparseOperator vacuumize(int p, Charge h, Charge g) const;

    SparseOperator::Matrix to_shaped(const SparseOperator& op) const;
    SparseOperator from_shaped(const SparseOperator::Matrix& m) const;

    struct Parts {
        int prefix;
        int rest;  // index into rest trees (per frame, not per charge)
        Charge h;
        Charge g;
    };
    const Parts& parts(int shaped_index) const { return parts_[shaped_index]; }
    /// Shaped index, or -1.
    int shaped_index(int prefix, int rest, Charge g) const;
    /// Rest-tree indices with charge h.
    const std::vector<int>& rests_with_charge(Charge h) const;

private:
    BasisPtr basis_;
    BasisPtr shaped_;
    int m_;
    SparseOperator::Matrix w_;  // rows shaped, cols canonical
    std::vector<PrefixTree> prefixes_;
    std::vector<Parts> parts_;
    std::map<std::tuple<int, int, Charge>, int> index_;
    std::map<Charge, std::vector<int>> rests_by_charge_;
    int vacuum_prefix_ = -1;
};

/// Element of a local operator basis on a contiguous prefix (after the
/// relabeling unitary for general mode sets). Single-mode elements use
/// ket = (a), bra = (a'), h = b_0, g = d, g2 = d'.
struct LocalBasisElement {
    std::vector<int> modes;
    PrefixTree ket;
    PrefixTree bra;
    Charge h = 0;  // rest charge; unused for observables summed over it
    Charge g = 0;
    Charge g2 = 0;
    SparseOperator op;
};

/// A^{a a' b0}_{d d'} for every admissible label tuple, realised on modes
/// `modes` (sorted). For one mode this is the candidate local algebra of
/// that mode; for several it is the commutant of the complement.
std::vector<LocalBasisElement> candidate_local_basis(const LadderSet& set, const std::vector<int>& modes);

/// |P><P'| (x) identity with prefix charge preserved: the local observables
/// whose diagram leaves the rest untouched. Summed over h and g.
std::vector<LocalBasisElement> local_observable_basis(const LadderSet& set, const std::vector<int>& modes);

struct LocalityCheck {
    bool local = false;
    double residual = 0.0;
};

/// Distance from the commutant of the complement's observable algebra,
/// measured after relabeling `modes` to the front.
LocalityCheck is_local_candidate(const LadderSet& set, const SparseOperator& op, const std::vector<int>& modes,
                                 double tol = kDefaultTolerance);

/// U = prod_i prod_j R^dagger_{j-1,j}: conjugation U X U^dagger moves
/// operators local on s_1..s_M to modes 1..M.
SparseOperator relabel_unitary(const LadderSet& set, const std::vector<int>& modes);

/// Projector onto "mode k holds the vacuum and the rest has charge b".
SparseOperator vacuum_element(const LadderSet& set, int k, Charge b);

/// O_{a,d,g} as the ordered product of F-weighted element sums.
/// `d` holds d_1..d_{M-1}; a vacuum leaf uses vacuum_element.
SparseOperator o_operator(const LadderSet& set, const std::vector<Charge>& a, const std::vector<Charge>& d, Charge g);

/// Element a_k^{b0,c0} as a ladder polynomial, or nullopt when the
/// canonical identities cannot isolate it (abelian rest charges beyond the
/// vacuum, or non-canonical tables).
std::optional<LadderPolynomial> element_polynomial(const LadderSet& set, Charge a, int k, Charge b0, Charge c0);

class NotObservableError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

class NotLocalError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

class NotExpressibleError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

struct Decomposition {
    LadderPolynomial polynomial;
    double residual = 0.0;
    /// "constant", "elements" (constructive) or "word-search" (fallback for
    /// models whose elements are not individually expressible).
    std::string method;
};

/// Writes a local observable on `modes` (1-based) as a ladder polynomial.
/// Throws NotObservableError, NotLocalError or NotExpressibleError.
Decomposition decompose_observable(const LadderSet& set, const SparseOperator& op, const std::vector<int>& modes,
                                   double tol = kDefaultTolerance);

// ------------------------------------------------------------- relations

struct RelationEntry {
    std::string name;
    double residual = 0.0;
    bool asserted = true;
    bool passed = true;
    std::string detail;
};

struct RelationReport {
    std::vector<RelationEntry> entries;
    double tolerance = kDefaultTolerance;

    bool passed() const;
    std::string to_json() const;
};

/// Single-mode Fibonacci identities for every mode (asserted), completeness
/// and variants (report-only), disjoint support of alpha_A alpha_B pairs.
RelationReport verify_relations(const LadderSet& set, double tol = kDefaultTolerance);

/// Canonical anticommutation relations of every j = 0 annihilator; meant
/// for models whose particles are all abelian fermion-like.
RelationReport verify_car(const LadderSet& set, double tol = kDefaultTolerance);

// ------------------------------------------------------------ Fock words

struct FockWord {
    LadderPolynomial word;
    double residual = 0.0;
};

/// Index of the all-vacuum state.
int vacuum_index(const FusionTreeBasis& basis);

/// Creation word reproducing canonical state `index` from |0>. Fibonacci
/// uses alpha^dagger / beta^dagger; other models the ladder creators.
FockWord fock_word(const LadderSet& set, int index);
Eigen::VectorXcd apply_word(const LadderSet& set, const LadderPolynomial& word);

/// Dimension of the common kernel of all annihilators.
int kernel_intersection_dimension(const LadderSet& set, Eigen::VectorXcd* vector = nullptr);

// ---------------------------------------------------------------- closure

struct ClosureResult {
    int dimension = 0;
    bool capped = false;
    Eigen::MatrixXcd basis;  // orthonormal columns, vectorised operators
};

/// Span of all generator products (with the identity).
ClosureResult algebra_closure(const std::vector<SparseOperator>& generators, int cap = 4096);

/// Distance from op to the span of a closure.
double span_residual(const ClosureResult& closure, const SparseOperator& op);

/// Dimension of the linear span of a set of operators.
int span_dimension(const std::vector<SparseOperator>& ops);

} // namespace anyon
