#include "anyon/ladder.hpp"

#include <json.hpp>

#include <cmath>

namespace anyon {

Complex CoefficientTable::at(Charge b0, Charge c0) const
{
    auto it = entries.find({b0, c0});
    return it == entries.end() ? Complex(0.0) : it->second;
}

std::vector<std::pair<Charge, Charge>> element_channels(const AnyonModel& model, Charge a)
{
    std::vector<std::pair<Charge, Charge>> out;
    for (Charge b = 0; b < model.num_types(); ++b)
        for (Charge c : model.fuse(a, b))
            out.emplace_back(b, c);
    return out;
}

namespace {

void check_particle(const AnyonModel& model, Charge a)
{
    if (a < 0 || a >= model.num_types())
        throw ArgumentError("particle index out of range");
    if (a == model.vacuum())
        throw ArgumentError("the vacuum has no annihilating elements");
}

} // namespace

int annihilator_count(const AnyonModel& model, Charge a)
{
    check_particle(model, a);
    return static_cast<int>(element_channels(model, a).size()) - model.num_types() + 1;
}

std::vector<CoefficientTable> coefficient_tables(const AnyonModel& model, Charge a)
{
    check_particle(model, a);
    const int n = model.num_types();
    // Table 0 picks the first channel of every rest charge; each further
    // table swaps exactly one rest charge onto one of its later channels.
    auto base = [&](int index) {
        CoefficientTable t{a, index, {}};
        for (Charge b = 0; b < n; ++b) {
            const auto& chans = model.fuse(a, b);
            for (size_t i = 0; i < chans.size(); ++i)
                t.entries[{b, chans[i]}] = i == 0 ? 1.0 : 0.0;
        }
        return t;
    };
    std::vector<CoefficientTable> out{base(0)};
    for (Charge b = 0; b < n; ++b) {
        const auto& chans = model.fuse(a, b);
        for (size_t i = 1; i < chans.size(); ++i) {
            auto t = base(static_cast<int>(out.size()));
            t.entries[{b, chans[0]}] = 0.0;
            t.entries[{b, chans[i]}] = 1.0;
            out.push_back(std::move(t));
        }
    }
    return out;
}

void check_table(const AnyonModel& model, const CoefficientTable& table)
{
    check_particle(model, table.particle);
    std::vector<bool> covered(model.num_types(), false);
    for (const auto& [key, value] : table.entries) {
        auto [b, c] = key;
        if (b < 0 || b >= model.num_types() || !model.fuses(table.particle, b, c))
            throw ArgumentError("coefficient key outside the fusion rules");
        if (std::abs(value) > kDropTolerance)
            covered[b] = true;
    }
    for (Charge b = 0; b < model.num_types(); ++b)
        if (!covered[b])
            throw ArgumentError("coefficient table has no support on rest charge " + model.label(b));
}

std::string coefficient_tables_to_json(const AnyonModel& model, const std::vector<CoefficientTable>& tables)
{
    nlohmann::json doc = nlohmann::json::object();
    for (const auto& t : tables)
        for (const auto& [key, v] : t.entries) {
            std::string k = model.label(t.particle) + "|" + std::to_string(t.index) + "|" + model.label(key.first) +
                            "|" + model.label(key.second);
            doc[k] = {v.real(), v.imag()};
        }
    return doc.dump(2);
}

namespace {

SparseOperator mode_one_element(const BasisPtr& basis, Charge a, Charge b0, Charge c0)
{
    const int n = basis->n_modes();
    const AnyonModel& m = basis->model();
    if (n == 1) {
        SparseOperator::Matrix p(basis->dim(), basis->dim());
        if (b0 == m.vacuum()) {
            int col = basis->index_of({a}, {});
            int row = basis->index_of({m.vacuum()}, {});
            p.insert(row, col) = 1.0;
        }
        return SparseOperator(basis, std::move(p));
    }
    // Mode 1 against the fused rest; the rest's own shape is irrelevant
    // because the element acts as the identity inside it.
    auto change = recouple(basis, TreeShape::first_leaf_split(n));
    const auto& sb = *change.to;
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int col = 0; col < sb.dim(); ++col) {
        const auto& st = sb.state(col);
        if (st.leaves[0] != a || st.total != c0 || sb.subtree_charge(st, 1, n - 1) != b0)
            continue;
        auto leaves = st.leaves;
        auto internal = st.internal;
        leaves[0] = m.vacuum();
        internal[0] = b0;
        trips.emplace_back(sb.index_of(leaves, internal), col, 1.0);
    }
    SparseOperator::Matrix p(sb.dim(), sb.dim());
    p.setFromTriplets(trips.begin(), trips.end());
    const auto& v = change.matrix;
    return SparseOperator(basis, SparseOperator::Matrix(SparseOperator::Matrix(v.adjoint()) * p * v));
}

void check_full(const BasisPtr& basis)
{
    if (basis->sector())
        throw ArgumentError("ladder operators need the full (all-sector) basis");
    if (!(basis->shape() == TreeShape::left_comb(basis->n_modes())))
        throw ArgumentError("ladder operators need the canonical left-comb basis");
}

} // namespace

SparseOperator annihilating_element(const BasisPtr& basis, const AnnihilatingElementId& id)
{
    check_full(basis);
    const AnyonModel& m = basis->model();
    check_particle(m, id.particle);
    if (id.rest < 0 || id.rest >= m.num_types() || !m.fuses(id.particle, id.rest, id.combined))
        throw ArgumentError("invalid fusion channel for annihilating element");
    if (id.mode < 1 || id.mode > basis->n_modes())
        throw ArgumentError("mode out of range");
    auto op = mode_one_element(basis, id.particle, id.rest, id.combined);
    for (int k = 2; k <= id.mode; ++k)
        op = transport_to_mode(op, k);
    return op;
}

SparseOperator transport_to_mode(const SparseOperator& op, int k)
{
    const auto& basis = op.basis();
    if (k < 2 || k > basis->n_modes())
        throw ArgumentError("transport target mode out of range");
    auto b = braid_adjacent(basis, k - 1, BraidSense::over);
    return b * op * b.adjoint();
}

// ----------------------------------------------------------------- LadderSet

LadderSet::LadderSet(const ModelPtr& model, int n_modes) : LadderSet(enumerate_basis(model, n_modes)) {}

LadderSet::LadderSet(BasisPtr basis, std::map<Charge, std::vector<CoefficientTable>> custom)
    : basis_(std::move(basis))
{
    check_full(basis_);
    const AnyonModel& m = model();
    const int n = n_modes();
    for (Charge a = 0; a < m.num_types(); ++a)
        if (a != m.vacuum())
            particles_.push_back(a);

    for (Charge a : particles_) {
        auto it = custom.find(a);
        if (it != custom.end()) {
            for (const auto& t : it->second) {
                check_table(m, t);
                if (t.particle != a)
                    throw ArgumentError("custom table filed under the wrong particle");
            }
            tables_[a] = it->second;
        } else {
            tables_[a] = coefficient_tables(m, a);
        }
    }

    for (int k = 1; k < n; ++k)
        braids_.push_back(braid_adjacent(basis_, k, BraidSense::over));

    for (Charge a : particles_)
        for (auto [b0, c0] : element_channels(m, a)) {
            auto op = mode_one_element(basis_, a, b0, c0);
            elements_.emplace(std::make_tuple(a, 1, b0, c0), op);
            for (int k = 2; k <= n; ++k) {
                const auto& b = braids_[k - 2];
                op = b * op * b.adjoint();
                elements_.emplace(std::make_tuple(a, k, b0, c0), op);
            }
        }

    for (Charge a : particles_)
        for (const auto& t : tables_[a])
            for (int k = 1; k <= n; ++k) {
                SparseOperator sum(basis_);
                for (const auto& [key, c] : t.entries)
                    if (std::abs(c) > kDropTolerance)
                        sum += elements_.at({a, k, key.first, key.second}) * c;
                creators_.emplace(std::make_tuple(a, k, t.index), sum.adjoint());
                annihilators_.emplace(std::make_tuple(a, k, t.index), std::move(sum));
            }
}

const std::vector<CoefficientTable>& LadderSet::tables(Charge a) const
{
    auto it = tables_.find(a);
    if (it == tables_.end())
        throw ArgumentError("no ladder operators for this particle");
    return it->second;
}

void LadderSet::check_mode(int k) const
{
    if (k < 1 || k > n_modes())
        throw ArgumentError("mode " + std::to_string(k) + " out of range");
}

const SparseOperator& LadderSet::annihilator(Charge a, int k, int j) const
{
    check_mode(k);
    auto it = annihilators_.find({a, k, j});
    if (it == annihilators_.end())
        throw ArgumentError("no annihilation operator with these indices");
    return it->second;
}

const SparseOperator& LadderSet::creator(Charge a, int k, int j) const
{
    check_mode(k);
    auto it = creators_.find({a, k, j});
    if (it == creators_.end())
        throw ArgumentError("no creation operator with these indices");
    return it->second;
}

const SparseOperator& LadderSet::element(Charge a, int k, Charge b0, Charge c0) const
{
    check_mode(k);
    auto it = elements_.find({a, k, b0, c0});
    if (it == elements_.end())
        throw ArgumentError("no annihilating element with these labels");
    return it->second;
}

const SparseOperator& LadderSet::braid(int k) const
{
    if (k < 1 || k >= n_modes())
        throw ArgumentError("braid position out of range");
    return braids_[k - 1];
}

// ------------------------------------------------------------------ Fibonacci

Charge fibonacci_tau(const AnyonModel& model)
{
    if (model.num_types() != 2)
        throw ArgumentError("model '" + model.name() + "' does not have Fibonacci fusion rules");
    const Charge t = model.vacuum() == 0 ? 1 : 0;
    if (model.fuse(t, t) != std::vector<Charge>{model.vacuum(), t} &&
        model.fuse(t, t) != std::vector<Charge>{t, model.vacuum()})
        throw ArgumentError("model '" + model.name() + "' does not have Fibonacci fusion rules");
    return t;
}

std::pair<SparseOperator, SparseOperator> fibonacci_pair(const LadderSet& set, int k)
{
    const Charge t = fibonacci_tau(set.model());
    const Charge e = set.model().vacuum();
    const double s = 1.0 / std::sqrt(2.0);
    const auto& et = set.element(t, k, e, t);
    SparseOperator alpha = et * Complex(s) + set.element(t, k, t, e);
    SparseOperator beta = et * Complex(s) + set.element(t, k, t, t);
    return {std::move(alpha), std::move(beta)};
}

SparseOperator identity_ladder(const LadderSet& set, int k)
{
    if (set.particles().empty())
        throw ArgumentError("model has no non-vacuum particle");
    const auto& a = set.annihilator(set.particles().front(), k, 0);
    return a * set.creator(set.particles().front(), k, 0);
}

} // namespace anyon
