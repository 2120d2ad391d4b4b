#pragma once

#include "anyon/fusion_basis.hpp"

#include <map>
#include <utility>
#include <vector>

namespace anyon {

/// Names the annihilating element a_k^{b0,c0}: particle a at mode k is sent
/// to the vacuum, conditioned on rest charge b0 and combined charge c0.
struct AnnihilatingElementId {
    int mode = 1;
    Charge particle = 0;
    Charge rest = 0;
    Charge combined = 0;
};

/// Coefficients C^{(j)}_{b0,c0} for one annihilation operator of particle a.
/// Entries cover every admissible (b0, c0), zeros included.
struct CoefficientTable {
    Charge particle = 0;
    int index = 0;
    std::map<std::pair<Charge, Charge>, Complex> entries;

    Complex at(Charge b0, Charge c0) const;
};

/// Admissible (b0, c0) pairs for particle a in label order.
std::vector<std::pair<Charge, Charge>> element_channels(const AnyonModel& model, Charge a);

/// J = n_a - n + 1.
int annihilator_count(const AnyonModel& model, Charge a);

/// The 0/1 tables of the general construction, in construction order.
std::vector<CoefficientTable> coefficient_tables(const AnyonModel& model, Charge a);

/// Throws ArgumentError unless the table is well formed for `model`: keys
/// admissible and at least one nonzero entry per rest charge.
void check_table(const AnyonModel& model, const CoefficientTable& table);

/// Structured export keyed "a|j|b0|c0" -> [re, im].
std::string coefficient_tables_to_json(const AnyonModel& model, const std::vector<CoefficientTable>& tables);

/// Builds a_k^{b0,c0} on a full (all-sector) canonical basis. Mode 1 is
/// built in the shape (1, rest); higher modes are transported from mode 1.
/// With a single mode only b0 = vacuum survives; other rest charges give
/// the zero operator.
SparseOperator annihilating_element(const BasisPtr& basis, const AnnihilatingElementId& id);

/// B_{k-1,k} op B_{k-1,k}^dagger (over sense), moving op from mode k-1 to k.
SparseOperator transport_to_mode(const SparseOperator& op, int k);

/// Annihilation operators for every particle and mode, with braids and
/// elements cached. Immutable after construction.
class LadderSet {
public:
    LadderSet(const ModelPtr& model, int n_modes);
    /// `custom` replaces the canonical tables for the listed particles.
    explicit LadderSet(BasisPtr basis, std::map<Charge, std::vector<CoefficientTable>> custom = {});

    const BasisPtr& basis() const { return basis_; }
    const AnyonModel& model() const { return basis_->model(); }
    int n_modes() const { return basis_->n_modes(); }

    /// Non-vacuum particles in label order.
    const std::vector<Charge>& particles() const { return particles_; }
    int count(Charge a) const { return static_cast<int>(tables(a).size()); }
    const std::vector<CoefficientTable>& tables(Charge a) const;

    const SparseOperator& annihilator(Charge a, int k, int j) const;
    const SparseOperator& creator(Charge a, int k, int j) const;
    const SparseOperator& element(Charge a, int k, Charge b0, Charge c0) const;
    /// Over-sense exchange of modes k, k+1.
    const SparseOperator& braid(int k) const;

private:
    void check_mode(int k) const;

    BasisPtr basis_;
    std::vector<Charge> particles_;
    std::map<Charge, std::vector<CoefficientTable>> tables_;
    std::vector<SparseOperator> braids_;
    std::map<std::tuple<Charge, int, Charge, Charge>, SparseOperator> elements_;
    std::map<std::tuple<Charge, int, int>, SparseOperator> annihilators_;
    std::map<std::tuple<Charge, int, int>, SparseOperator> creators_;
};

/// Unnormalised Fibonacci pair (alpha_k, beta_k).
std::pair<SparseOperator, SparseOperator> fibonacci_pair(const LadderSet& set, int k);

/// alpha alpha^dagger for the first particle and j = 0.
SparseOperator identity_ladder(const LadderSet& set, int k);

/// The non-vacuum type of a model with Fibonacci fusion rules
/// (two types, tau x tau = e + tau). Throws ArgumentError otherwise.
Charge fibonacci_tau(const AnyonModel& model);

} // namespace anyon
