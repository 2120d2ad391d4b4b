#include "anyon/algebra.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace anyon {

namespace {

void check_canonical(const BasisPtr& basis)
{
    if (basis->sector())
        throw ArgumentError("operation needs the full (all-sector) basis");
    if (!(basis->shape() == TreeShape::left_comb(basis->n_modes())))
        throw ArgumentError("operation needs the canonical left-comb basis");
}

std::vector<int> checked_modes(const LadderSet& set, std::vector<int> modes)
{
    if (modes.empty())
        throw ArgumentError("mode set must not be empty");
    std::sort(modes.begin(), modes.end());
    if (std::adjacent_find(modes.begin(), modes.end()) != modes.end())
        throw ArgumentError("mode set contains duplicates");
    if (modes.front() < 1 || modes.back() > set.n_modes())
        throw ArgumentError("mode set outside 1.." + std::to_string(set.n_modes()));
    return modes;
}

SparseOperator::Matrix sparse_identity(int n)
{
    SparseOperator::Matrix m(n, n);
    m.setIdentity();
    return m;
}

} // namespace

// -------------------------------------------------------------- PrefixFrame

PrefixFrame::PrefixFrame(BasisPtr basis, int m) : basis_(std::move(basis)), m_(m)
{
    check_canonical(basis_);
    const int n = basis_->n_modes();
    if (m < 1 || m > n)
        throw ArgumentError("prefix size out of range");
    const TreeShape shape = TreeShape::prefix_split(n, m);
    if (shape == basis_->shape()) {
        shaped_ = basis_;
        w_ = sparse_identity(basis_->dim());
    } else {
        auto change = recouple(basis_, shape);
        shaped_ = change.to;
        w_ = change.matrix;
    }

    const Charge vac = basis_->model().vacuum();
    std::map<PrefixTree, int> prefix_ids;
    std::map<std::vector<Charge>, int> rest_ids;
    parts_.reserve(shaped_->dim());
    for (int i = 0; i < shaped_->dim(); ++i) {
        const auto& st = shaped_->state(i);
        PrefixTree p;
        p.leaves.assign(st.leaves.begin(), st.leaves.begin() + m);
        p.internal.assign(st.internal.begin(), st.internal.begin() + (m - 1));
        p.charge = m == 1 ? st.leaves[0] : shaped_->subtree_charge(st, 0, m - 1);
        auto [pit, pnew] = prefix_ids.emplace(p, static_cast<int>(prefixes_.size()));
        if (pnew)
            prefixes_.push_back(p);

        std::vector<Charge> rkey(st.leaves.begin() + m, st.leaves.end());
        if (m < n)
            rkey.insert(rkey.end(), st.internal.begin() + m, st.internal.end());
        const Charge h = m < n ? shaped_->subtree_charge(st, m, n - 1) : vac;
        auto [rit, rnew] = rest_ids.emplace(rkey, static_cast<int>(rest_ids.size()));
        if (rnew)
            rests_by_charge_[h].push_back(rit->second);

        parts_.push_back({pit->second, rit->second, h, st.total});
        index_[{pit->second, rit->second, st.total}] = i;
    }
    PrefixTree vac_tree{std::vector<Charge>(m, vac), std::vector<Charge>(m - 1, vac), vac};
    vacuum_prefix_ = prefix_index(vac_tree);
}

int PrefixFrame::prefix_index(const PrefixTree& p) const
{
    auto it = std::find(prefixes_.begin(), prefixes_.end(), p);
    return it == prefixes_.end() ? -1 : static_cast<int>(it - prefixes_.begin());
}

std::vector<Charge> PrefixFrame::rest_charges() const
{
    std::vector<Charge> out;
    for (const auto& [h, v] : rests_by_charge_)
        out.push_back(h);
    return out;
}

int PrefixFrame::rest_dim(Charge h) const
{
    auto it = rests_by_charge_.find(h);
    return it == rests_by_charge_.end() ? 0 : static_cast<int>(it->second.size());
}

const std::vector<int>& PrefixFrame::rests_with_charge(Charge h) const
{
    static const std::vector<int> none;
    auto it = rests_by_charge_.find(h);
    return it == rests_by_charge_.end() ? none : it->second;
}

int PrefixFrame::shaped_index(int prefix, int rest, Charge g) const
{
    auto it = index_.find({prefix, rest, g});
    return it == index_.end() ? -1 : it->second;
}

SparseOperator::Matrix PrefixFrame::to_shaped(const SparseOperator& op) const
{
    return SparseOperator::Matrix(w_ * op.matrix() * SparseOperator::Matrix(w_.adjoint()));
}

SparseOperator PrefixFrame::from_shaped(const SparseOperator::Matrix& m) const
{
    return SparseOperator(basis_, SparseOperator::Matrix(SparseOperator::Matrix(w_.adjoint()) * m * w_));
}

SparseOperator PrefixFrame::unit(int p, int p2, Charge h, Charge g, Charge g2) const
{
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int r : rests_with_charge(h)) {
        int row = shaped_index(p, r, g);
        int col = shaped_index(p2, r, g2);
        if (row >= 0 && col >= 0)
            trips.emplace_back(row, col, 1.0);
    }
    SparseOperator::Matrix m(shaped_->dim(), shaped_->dim());
    m.setFromTriplets(trips.begin(), trips.end());
    return from_shaped(m);
}

SparseOperator PrefixFrame::vacuumize(int p, Charge h, Charge g) const
{
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int r : rests_with_charge(h)) {
        int col = shaped_index(p, r, g);
        int row = shaped_index(vacuum_prefix_, r, h);
        if (row >= 0 && col >= 0)
            trips.emplace_back(row, col, 1.0);
    }
    SparseOperator::Matrix m(shaped_->dim(), shaped_->dim());
    m.setFromTriplets(trips.begin(), trips.end());
    return from_shaped(m);
}

// ------------------------------------------------------------ local bases

SparseOperator relabel_unitary(const LadderSet& set, const std::vector<int>& modes_in)
{
    const auto modes = checked_modes(set, modes_in);
    const int m = static_cast<int>(modes.size());
    SparseOperator u = SparseOperator::identity(set.basis());
    for (int i = 0; i < m; ++i) {
        const int target = m - i;  // 1-based destination of s_{M-i}
        const int s = modes[m - 1 - i];
        for (int j = target + 1; j <= s; ++j)
            u = u * set.braid(j - 1).adjoint();
    }
    return u;
}

std::vector<LocalBasisElement> candidate_local_basis(const LadderSet& set, const std::vector<int>& modes_in)
{
    const auto modes = checked_modes(set, modes_in);
    const AnyonModel& model = set.model();
    PrefixFrame frame(set.basis(), static_cast<int>(modes.size()));
    const auto u = relabel_unitary(set, modes);
    const auto ud = u.adjoint();
    const auto& trees = frame.prefix_trees();
    std::vector<LocalBasisElement> out;
    for (Charge h : frame.rest_charges())
        for (size_t p = 0; p < trees.size(); ++p)
            for (size_t p2 = 0; p2 < trees.size(); ++p2)
                for (Charge g : model.fuse(trees[p].charge, h))
                    for (Charge g2 : model.fuse(trees[p2].charge, h)) {
                        auto op = ud * frame.unit(static_cast<int>(p), static_cast<int>(p2), h, g, g2) * u;
                        out.push_back({modes, trees[p], trees[p2], h, g, g2, std::move(op)});
                    }
    return out;
}

std::vector<LocalBasisElement> local_observable_basis(const LadderSet& set, const std::vector<int>& modes_in)
{
    const auto modes = checked_modes(set, modes_in);
    const AnyonModel& model = set.model();
    PrefixFrame frame(set.basis(), static_cast<int>(modes.size()));
    const auto u = relabel_unitary(set, modes);
    const auto ud = u.adjoint();
    const auto& trees = frame.prefix_trees();
    std::vector<LocalBasisElement> out;
    for (size_t p = 0; p < trees.size(); ++p)
        for (size_t p2 = 0; p2 < trees.size(); ++p2) {
            if (trees[p].charge != trees[p2].charge)
                continue;
            SparseOperator sum(set.basis());
            for (Charge h : frame.rest_charges())
                for (Charge g : model.fuse(trees[p].charge, h))
                    sum += frame.unit(static_cast<int>(p), static_cast<int>(p2), h, g, g);
            out.push_back({modes, trees[p], trees[p2], model.vacuum(), trees[p].charge, trees[p].charge,
                           ud * sum * u});
        }
    return out;
}

namespace {

/// Projection of a shaped operator onto the commutant of the rest algebra:
/// coefficient per (P, P', h, g, g'), averaged over rest trees.
struct CommutantProjection {
    std::map<std::tuple<int, int, Charge, Charge, Charge>, Complex> coeff;
    double residual = 0.0;
};

CommutantProjection project_commutant(const PrefixFrame& frame, const SparseOperator::Matrix& t)
{
    CommutantProjection out;
    for (int k = 0; k < t.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(t, k); it; ++it) {
            const auto& r = frame.parts(static_cast<int>(it.row()));
            const auto& c = frame.parts(static_cast<int>(it.col()));
            if (r.rest == c.rest)
                out.coeff[{r.prefix, c.prefix, r.h, r.g, c.g}] += it.value();
        }
    std::vector<Eigen::Triplet<Complex>> trips;
    for (auto& [key, v] : out.coeff) {
        auto [p, p2, h, g, g2] = key;
        v /= static_cast<double>(frame.rest_dim(h));
        for (int r : frame.rests_with_charge(h))
            trips.emplace_back(frame.shaped_index(p, r, g), frame.shaped_index(p2, r, g2), v);
    }
    SparseOperator::Matrix recon(t.rows(), t.cols());
    recon.setFromTriplets(trips.begin(), trips.end());
    SparseOperator::Matrix diff = t - recon;
    for (int k = 0; k < diff.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(diff, k); it; ++it)
            out.residual = std::max(out.residual, std::abs(it.value()));
    return out;
}

} // namespace

LocalityCheck is_local_candidate(const LadderSet& set, const SparseOperator& op, const std::vector<int>& modes_in,
                                 double tol)
{
    if (!op.basis()->same_space(*set.basis()))
        throw ArgumentError("operator and ladder set live on different bases");
    const auto modes = checked_modes(set, modes_in);
    const auto u = relabel_unitary(set, modes);
    PrefixFrame frame(set.basis(), static_cast<int>(modes.size()));
    auto proj = project_commutant(frame, frame.to_shaped(u * op * u.adjoint()));
    return {proj.residual <= tol, proj.residual};
}

// -------------------------------------------------------------- O-operator

SparseOperator vacuum_element(const LadderSet& set, int k, Charge b)
{
    if (set.particles().empty())
        throw ArgumentError("model has no non-vacuum particle");
    const Charge a = set.particles().front();
    const Charge c = set.model().fuse(a, b).front();
    const auto& e = set.element(a, k, b, c);
    return e * e.adjoint();
}

namespace {

void check_prefix_labels(const AnyonModel& m, const std::vector<Charge>& a, const std::vector<Charge>& d)
{
    if (a.empty())
        throw ArgumentError("need at least one mode label");
    if (d.size() + 1 != a.size())
        throw ArgumentError("need exactly M-1 internal charges");
    for (Charge x : a)
        if (x < 0 || x >= m.num_types())
            throw ArgumentError("label out of range");
    Charge prev = a[0];
    for (size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0 || d[i] >= m.num_types() || !m.fuses(prev, a[i + 1], d[i]))
            throw ArgumentError("internal charges inconsistent with the fusion rules");
        prev = d[i];
    }
}

} // namespace

SparseOperator o_operator(const LadderSet& set, const std::vector<Charge>& a, const std::vector<Charge>& d, Charge g)
{
    const AnyonModel& model = set.model();
    check_prefix_labels(model, a, d);
    const int mm = static_cast<int>(a.size());
    if (mm > set.n_modes())
        throw ArgumentError("more labels than modes");
    if (g < 0 || g >= model.num_types())
        throw ArgumentError("charge out of range");
    const int nt = model.num_types();
    const Charge vac = model.vacuum();

    auto elem = [&](Charge x, int k, Charge b, Charge c) {
        if (x == vac)
            return b == c ? vacuum_element(set, k, b) : SparseOperator(set.basis());
        if (!model.fuses(x, b, c))
            return SparseOperator(set.basis());
        return set.element(x, k, b, c);
    };

    SparseOperator result(set.basis());
    for (Charge b1 = 0; b1 < nt; ++b1)
        result += elem(a[0], 1, b1, g);
    for (int m = 2; m <= mm; ++m) {
        const Charge dm2 = m == 2 ? a[0] : d[m - 3];
        const Charge dm1 = d[m - 2];
        SparseOperator x(set.basis());
        for (Charge b = 0; b < nt; ++b)
            for (Charge c = 0; c < nt; ++c) {
                Complex w = std::conj(model.f_symbol(dm2, a[m - 1], b, g, dm1, c));
                if (std::abs(w) > kDropTolerance)
                    x += elem(a[m - 1], m, b, c) * w;
            }
        result = x * result;
    }
    return result;
}

// ------------------------------------------------------ element polynomials

namespace {

bool canonical_tables(const LadderSet& set, Charge a)
{
    const auto ref = coefficient_tables(set.model(), a);
    const auto& got = set.tables(a);
    if (ref.size() != got.size())
        return false;
    for (size_t i = 0; i < ref.size(); ++i)
        for (const auto& [key, v] : ref[i].entries)
            if (std::abs(got[i].at(key.first, key.second) - v) > kDropTolerance)
                return false;
    return true;
}

int table_for(const LadderSet& set, Charge a, Charge b, Charge c)
{
    const auto& chans = set.model().fuse(a, b);
    for (const auto& t : set.tables(a))
        if (std::abs(t.at(b, c) - 1.0) < kDropTolerance && std::abs(t.at(b, chans[0])) < kDropTolerance)
            return t.index;
    return -1;
}

LadderPolynomial lad(Charge a, int k, int j, bool dagger = false)
{
    return LadderPolynomial::of(Generator::ladder(a, k, j, dagger));
}

// Elements whose rest charge has several channels: isolated directly.
LadderPolynomial multi_channel_element(const LadderSet& set, Charge a, int k, Charge b, Charge c)
{
    const auto& chans = set.model().fuse(a, b);
    const auto a0 = lad(a, k, 0);
    const auto proj0 = lad(a, k, 0, true) * a0;
    if (c != chans[0]) {
        const auto aj = lad(a, k, table_for(set, a, b, c));
        return aj - aj * proj0;
    }
    const auto aj = lad(a, k, table_for(set, a, b, chans[1]));
    return a0 - aj + (aj - aj * proj0);
}

} // namespace

std::optional<LadderPolynomial> element_polynomial(const LadderSet& set, Charge a, int k, Charge b0, Charge c0)
{
    const AnyonModel& model = set.model();
    if (a == model.vacuum() || !model.fuses(a, b0, c0))
        throw ArgumentError("invalid annihilating element labels");
    if (!canonical_tables(set, a))
        return std::nullopt;
    const int nt = model.num_types();
    if (model.fuse(a, b0).size() >= 2)
        return multi_channel_element(set, a, k, b0, c0);

    // Sum of every single-channel element: alpha^{(0)} minus the isolated
    // first-channel elements of multi-channel rest charges.
    LadderPolynomial single = lad(a, k, 0);
    for (Charge b = 0; b < nt; ++b)
        if (model.fuse(a, b).size() >= 2)
            single -= multi_channel_element(set, a, k, b, model.fuse(a, b)[0]);

    // Projector onto "mode k empty, rest charge b" via a particle that has
    // several channels with b.
    auto rest_projector = [&](Charge b) -> std::optional<LadderPolynomial> {
        for (Charge s : set.particles()) {
            const auto& chans = model.fuse(s, b);
            if (chans.size() >= 2 && canonical_tables(set, s)) {
                auto e = multi_channel_element(set, s, k, b, chans[1]);
                return e * e.adjoint();
            }
        }
        return std::nullopt;
    };

    if (!model.is_abelian(b0)) {
        auto p = rest_projector(b0);
        if (!p)
            return std::nullopt;
        return *p * single;
    }
    // Abelian rest charges: only their sum is reachable, so b0 must be the
    // sole abelian type.
    for (Charge b = 0; b < nt; ++b)
        if (b != b0 && model.is_abelian(b))
            return std::nullopt;
    LadderPolynomial out = single;
    for (Charge b = 0; b < nt; ++b) {
        if (model.is_abelian(b) || model.fuse(a, b).size() >= 2)
            continue;
        auto p = rest_projector(b);
        if (!p)
            return std::nullopt;
        out -= *p * single;
    }
    return out;
}

namespace {

/// Projector onto "mode k empty, rest b" as E E^dagger for the shortest
/// expressible element.
std::optional<LadderPolynomial> vacuum_polynomial(const LadderSet& set, int k, Charge b)
{
    std::optional<LadderPolynomial> best;
    for (Charge a : set.particles())
        for (Charge c : set.model().fuse(a, b)) {
            auto e = element_polynomial(set, a, k, b, c);
            if (e && (!best || e->size() < best->size()))
                best = e;
        }
    if (!best)
        return std::nullopt;
    return *best * best->adjoint();
}

/// V_{P,h,g} as a sum over chains c_2..c_M of F-weighted element products
/// X_M^{h,c_M} ... X_2^{c_3,c_2} X_1^{c_2,g}.
class VacuumizerBuilder {
public:
    explicit VacuumizerBuilder(const LadderSet& set) : set_(set) {}

    std::optional<LadderPolynomial> build(const PrefixTree& p, Charge h, Charge g)
    {
        auto key = std::make_tuple(p, h, g);
        auto it = cache_.find(key);
        if (it != cache_.end())
            return it->second;
        auto v = compute(p, h, g);
        cache_.emplace(key, v);
        return v;
    }

private:
    std::optional<LadderPolynomial> factor(Charge a, int k, Charge b, Charge c)
    {
        auto key = std::make_tuple(a, k, b, c);
        auto it = factors_.find(key);
        if (it != factors_.end())
            return it->second;
        std::optional<LadderPolynomial> f;
        if (a == set_.model().vacuum())
            f = b == c ? vacuum_polynomial(set_, k, b) : LadderPolynomial();
        else if (!set_.model().fuses(a, b, c))
            f = LadderPolynomial();
        else
            f = element_polynomial(set_, a, k, b, c);
        factors_.emplace(key, f);
        return f;
    }

    std::optional<LadderPolynomial> compute(const PrefixTree& p, Charge h, Charge g)
    {
        const AnyonModel& model = set_.model();
        const int mm = static_cast<int>(p.leaves.size());
        const int nt = model.num_types();
        const auto& a = p.leaves;
        auto dval = [&](int i) { return i == 0 ? a[0] : p.internal[i - 1]; };
        LadderPolynomial total;
        bool ok = true;
        // c[m] for m = 2..M; c[M+1] stands for h.
        std::vector<Charge> c(mm + 2, 0);
        c[mm + 1] = h;
        std::function<void(int, Complex, LadderPolynomial)> rec = [&](int m, Complex w, LadderPolynomial prod) {
            if (!ok)
                return;
            if (m == 1) {
                const Charge b1 = mm == 1 ? h : c[2];
                auto f = factor(a[0], 1, b1, g);
                if (!f) {
                    ok = false;
                    return;
                }
                if (!f->is_zero())
                    total += (prod * *f) * w;
                return;
            }
            const Charge b = c[m + 1];
            for (Charge cm = 0; cm < nt; ++cm) {
                Complex fw = model.f_symbol(dval(m - 2), a[m - 1], b, g, dval(m - 1), cm);
                if (std::abs(fw) <= kDropTolerance)
                    continue;
                auto f = factor(a[m - 1], m, b, cm);
                if (!f) {
                    ok = false;
                    return;
                }
                if (f->is_zero())
                    continue;
                c[m] = cm;
                rec(m - 1, w * fw, prod * *f);
            }
        };
        rec(mm, 1.0, LadderPolynomial::constant(1.0));
        if (!ok)
            return std::nullopt;
        return total;
    }

    const LadderSet& set_;
    std::map<std::tuple<PrefixTree, Charge, Charge>, std::optional<LadderPolynomial>> cache_;
    std::map<std::tuple<Charge, int, Charge, Charge>, std::optional<LadderPolynomial>> factors_;
};

std::optional<Decomposition> decompose_constructive(const LadderSet& set, const PrefixFrame& frame,
                                                    const CommutantProjection& proj)
{
    VacuumizerBuilder builder(set);
    const auto& trees = frame.prefix_trees();
    LadderPolynomial poly;
    for (const auto& [key, v] : proj.coeff) {
        auto [p, p2, h, g, g2] = key;
        if (g != g2 || std::abs(v) < LadderPolynomial::kCoefficientCutoff)
            continue;
        auto left = builder.build(trees[p], h, g);
        auto right = builder.build(trees[p2], h, g);
        if (!left || !right)
            return std::nullopt;
        poly += (left->adjoint() * *right) * v;
    }
    return Decomposition{std::move(poly), 0.0, "elements"};
}

Decomposition decompose_word_search(const LadderSet& set, const SparseOperator& op, const std::vector<int>& modes,
                                    double tol)
{
    std::vector<Generator> gens;
    for (int k : modes)
        for (Charge a : set.particles())
            for (int j = 0; j < set.count(a); ++j) {
                gens.push_back(Generator::ladder(a, k, j, false));
                gens.push_back(Generator::ladder(a, k, j, true));
            }
    constexpr size_t kMaxWords = 3000;
    std::vector<Word> words{{}};
    std::vector<Word> layer{{}};
    while (true) {
        if (words.size() + layer.size() * gens.size() > kMaxWords)
            break;
        std::vector<Word> next;
        for (const auto& w : layer)
            for (const auto& g : gens) {
                Word x = w;
                x.push_back(g);
                next.push_back(std::move(x));
            }
        if (next.empty())
            break;
        words.insert(words.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    const int d = set.basis()->dim();
    PolynomialEvaluator ev(set);
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(words.size()));
    for (size_t i = 0; i < words.size(); ++i) {
        Eigen::MatrixXcd m = ev.word(words[i]).dense();
        a.col(static_cast<Eigen::Index>(i)) = Eigen::Map<Eigen::VectorXcd>(m.data(), m.size());
    }
    Eigen::MatrixXcd target = op.dense();
    Eigen::VectorXcd rhs = Eigen::Map<Eigen::VectorXcd>(target.data(), target.size());
    Eigen::VectorXcd x = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(a).solve(rhs);
    LadderPolynomial poly;
    for (size_t i = 0; i < words.size(); ++i)
        if (std::abs(x(i)) > 1e-12)
            poly += LadderPolynomial::of_word(words[i], x(i));
    const double res = max_abs_diff(ev.evaluate(poly), op);
    if (res > tol)
        throw NotExpressibleError("observable is not a polynomial of the ladder operators on these modes (residual " +
                                  std::to_string(res) + ")");
    return {std::move(poly), res, "word-search"};
}

} // namespace

Decomposition decompose_observable(const LadderSet& set, const SparseOperator& op, const std::vector<int>& modes_in,
                                   double tol)
{
    if (!op.basis()->same_space(*set.basis()))
        throw ArgumentError("operator and ladder set live on different bases");
    const auto modes = checked_modes(set, modes_in);
    const AnyonModel& model = set.model();
    for (auto [rg, cg] : op.sector_pairs())
        if (rg != cg)
            throw NotObservableError("operator maps total charge " + model.label(cg) + " to " + model.label(rg) +
                                     "; observables conserve the total charge");

    // Multiples of the identity need no ladder operators at all.
    {
        const int d = op.dim();
        Complex c = d ? op.matrix().diagonal().sum() / static_cast<double>(d) : Complex(0.0);
        SparseOperator scaled = SparseOperator::identity(set.basis()) * c;
        if (max_abs_diff(scaled, op) <= tol)
            return {LadderPolynomial::constant(c), max_abs_diff(scaled, op), "constant"};
    }

    const auto u = relabel_unitary(set, modes);
    PrefixFrame frame(set.basis(), static_cast<int>(modes.size()));
    auto proj = project_commutant(frame, frame.to_shaped(u * op * u.adjoint()));
    if (proj.residual > tol)
        throw NotLocalError("operator is not local on the requested modes (residual " +
                            std::to_string(proj.residual) + ")");

    auto result = decompose_constructive(set, frame, proj);
    if (!result)
        return decompose_word_search(set, op, modes, tol);
    std::map<int, int> relabel;
    for (size_t i = 0; i < modes.size(); ++i)
        relabel[static_cast<int>(i) + 1] = modes[i];
    result->polynomial = result->polynomial.relabel_modes(relabel);
    result->residual = max_abs_diff(evaluate(result->polynomial, set), op);
    return *result;
}

// ---------------------------------------------------------------- relations

bool RelationReport::passed() const
{
    return std::all_of(entries.begin(), entries.end(), [](const RelationEntry& e) { return !e.asserted || e.passed; });
}

std::string RelationReport::to_json() const
{
    nlohmann::json doc;
    doc["tolerance"] = tolerance;
    doc["passed"] = passed();
    doc["relations"] = nlohmann::json::array();
    for (const auto& e : entries)
        doc["relations"].push_back({{"name", e.name},
                                    {"residual", e.residual},
                                    {"status", e.asserted ? (e.passed ? "pass" : "fail") : "report-only"},
                                    {"detail", e.detail}});
    return doc.dump(2);
}

namespace {

struct FamilyAccumulator {
    RelationEntry entry;
    std::ostringstream detail;

    FamilyAccumulator(std::string name, bool asserted) { entry = {std::move(name), 0.0, asserted, true, ""}; }
    void add(int mode, double r)
    {
        entry.residual = std::max(entry.residual, r);
        detail << (detail.tellp() > 0 ? ", " : "") << "mode " << mode << ": " << r;
    }
    RelationEntry finish(double tol)
    {
        entry.passed = entry.residual <= tol;
        entry.detail = detail.str();
        return entry;
    }
};

double frob(const SparseOperator& a) { return a.matrix().norm(); }

std::vector<int> nonzero_columns(const SparseOperator& op)
{
    std::vector<int> cols;
    const auto& m = op.matrix();
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(m, k); it; ++it)
            if (std::abs(it.value()) > kDefaultTolerance) {
                cols.push_back(static_cast<int>(it.col()));
                break;
            }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return cols;
}

} // namespace

RelationReport verify_relations(const LadderSet& set, double tol)
{
    fibonacci_tau(set.model());
    RelationReport report;
    report.tolerance = tol;
    FamilyAccumulator sq("alpha^2 = 0", true);
    FamilyAccumulator ab("alpha beta = beta alpha = 0", true);
    FamilyAccumulator aa("alpha alpha+ = beta beta+", true);
    FamilyAccumulator four("alpha beta+ beta = alpha beta+ alpha = beta alpha+ alpha = beta alpha+ beta", true);
    FamilyAccumulator a3("alpha alpha+ alpha = alpha - beta alpha+ alpha", true);
    FamilyAccumulator b3("beta beta+ beta = beta - alpha beta+ beta", true);
    FamilyAccumulator comp("completeness: beta+ beta + alpha+ alpha + alpha alpha+ + alpha beta+ alpha beta+ = I",
                           false);
    FamilyAccumulator comp_fit("completeness with best rescaled last term", false);
    FamilyAccumulator comp_swap("completeness with last term beta alpha+ beta alpha+", false);
    FamilyAccumulator comp_drop("completeness without last term", false);
    std::ostringstream lambdas;

    const auto id = SparseOperator::identity(set.basis());
    for (int k = 1; k <= set.n_modes(); ++k) {
        auto [al, be] = fibonacci_pair(set, k);
        const auto ald = al.adjoint();
        const auto bed = be.adjoint();
        sq.add(k, (al * al).max_abs());
        ab.add(k, std::max((al * be).max_abs(), (be * al).max_abs()));
        aa.add(k, max_abs_diff(al * ald, be * bed));
        const auto t1 = al * bed * be;
        const auto t2 = al * bed * al;
        const auto t3 = be * ald * al;
        const auto t4 = be * ald * be;
        four.add(k, std::max({max_abs_diff(t1, t2), max_abs_diff(t1, t3), max_abs_diff(t1, t4)}));
        a3.add(k, max_abs_diff(al * ald * al, al - be * ald * al));
        b3.add(k, max_abs_diff(be * bed * be, be - al * bed * be));

        const auto base = bed * be + ald * al + al * ald - id;
        const auto last = al * bed * al * bed;
        comp.add(k, (base + last).max_abs());
        comp_drop.add(k, base.max_abs());
        comp_swap.add(k, (base + be * ald * be * ald).max_abs());
        // Real lambda minimising || base + lambda last ||_F.
        const double ll = frob(last) * frob(last);
        double lambda = 0.0;
        if (ll > 0) {
            Complex ip = last.matrix().conjugate().cwiseProduct(base.matrix()).sum();
            lambda = -ip.real() / ll;
        }
        comp_fit.add(k, (base + last * Complex(lambda)).max_abs());
        lambdas << (k > 1 ? ", " : "") << "mode " << k << ": lambda=" << lambda;
    }
    for (auto* f : {&sq, &ab, &aa, &four, &a3, &b3, &comp, &comp_fit, &comp_swap, &comp_drop})
        report.entries.push_back(f->finish(tol));
    report.entries[7].detail += " (" + lambdas.str() + ")";

    // alpha_A alpha_B vs alpha_B alpha_A column supports.
    RelationEntry disjoint{"disjoint support of alpha_A alpha_B and alpha_B alpha_A", 0.0, false, true, ""};
    std::ostringstream dd;
    int overlaps = 0;
    for (int x = 1; x <= set.n_modes(); ++x)
        for (int y = x + 1; y <= set.n_modes(); ++y) {
            auto ax = fibonacci_pair(set, x).first;
            auto ay = fibonacci_pair(set, y).first;
            auto c1 = nonzero_columns(ax * ay);
            auto c2 = nonzero_columns(ay * ax);
            std::vector<int> both;
            std::set_intersection(c1.begin(), c1.end(), c2.begin(), c2.end(), std::back_inserter(both));
            overlaps += static_cast<int>(both.size());
            dd << (dd.tellp() > 0 ? ", " : "") << "(" << x << "," << y << "): |supp|=" << c1.size() << "/"
               << c2.size() << " shared=" << both.size();
        }
    disjoint.residual = overlaps;
    disjoint.passed = overlaps == 0;
    disjoint.detail = dd.str();
    report.entries.push_back(disjoint);
    return report;
}

RelationReport verify_car(const LadderSet& set, double tol)
{
    RelationReport report;
    report.tolerance = tol;
    const auto id = SparseOperator::identity(set.basis());
    RelationEntry mixed{"{a_i, a_j+} = delta_ij", 0.0, true, true, ""};
    RelationEntry pure{"{a_i, a_j} = 0", 0.0, true, true, ""};
    RelationEntry vac{"a_i |0> = 0", 0.0, true, true, ""};
    const int v = vacuum_index(*set.basis());
    for (Charge a : set.particles())
        for (Charge b : set.particles())
            for (int i = 1; i <= set.n_modes(); ++i)
                for (int j = 1; j <= set.n_modes(); ++j) {
                    const auto& ai = set.annihilator(a, i, 0);
                    const auto& bj = set.annihilator(b, j, 0);
                    auto expect = (a == b && i == j) ? id : SparseOperator(set.basis());
                    mixed.residual = std::max(mixed.residual, max_abs_diff(anticommutator(ai, bj.adjoint()), expect));
                    pure.residual = std::max(pure.residual, anticommutator(ai, bj).max_abs());
                }
    for (Charge a : set.particles())
        for (int i = 1; i <= set.n_modes(); ++i)
            vac.residual = std::max(vac.residual, set.annihilator(a, i, 0).matrix().col(v).norm());
    for (auto* e : {&mixed, &pure, &vac}) {
        e->passed = e->residual <= tol;
        report.entries.push_back(*e);
    }
    return report;
}

// --------------------------------------------------------------- Fock words

int vacuum_index(const FusionTreeBasis& basis)
{
    const Charge vac = basis.model().vacuum();
    const int n = basis.n_modes();
    return basis.index_of(std::vector<Charge>(n, vac), std::vector<Charge>(std::max(n - 1, 0), vac));
}

Eigen::VectorXcd apply_word(const LadderSet& set, const LadderPolynomial& word)
{
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(set.basis()->dim());
    v(vacuum_index(*set.basis())) = 1.0;
    return evaluate(word, set).apply(v);
}

FockWord fock_word(const LadderSet& set, int index)
{
    const auto& basis = *set.basis();
    if (index < 0 || index >= basis.dim())
        throw ArgumentError("state index out of range");
    const int n = set.n_modes();
    bool fib = true;
    try {
        fibonacci_tau(set.model());
    } catch (const ArgumentError&) {
        fib = false;
    }
    // Per-mode alphabet of creation symbols.
    std::vector<std::vector<Generator>> alphabet(n + 1);
    for (int k = 1; k <= n; ++k) {
        if (fib) {
            alphabet[k] = {Generator::alpha(k, true), Generator::beta(k, true)};
        } else {
            for (Charge a : set.particles())
                for (int j = 0; j < set.count(a); ++j)
                    alphabet[k].push_back(Generator::ladder(a, k, j, true));
        }
    }
    const auto& target = basis.state(index);
    const Charge vac = set.model().vacuum();
    std::vector<int> occupied;
    for (int k = 1; k <= n; ++k)
        if (target.leaves[k - 1] != vac)
            occupied.push_back(k);

    PolynomialEvaluator ev(set);
    Eigen::VectorXcd vac_vec = Eigen::VectorXcd::Zero(basis.dim());
    vac_vec(vacuum_index(basis)) = 1.0;

    // Words create the occupied modes once each, in increasing or
    // decreasing mode order.
    std::vector<Word> words;
    std::function<void(size_t, Word)> rec = [&](size_t i, Word w) {
        if (i == occupied.size()) {
            words.push_back(w);
            return;
        }
        for (const auto& g : alphabet[occupied[i]]) {
            Word x = w;
            x.insert(x.begin(), g);
            rec(i + 1, x);
        }
    };
    rec(0, {});
    const size_t n_increasing = words.size();
    for (size_t i = 0; i < n_increasing; ++i) {
        Word r(words[i].rbegin(), words[i].rend());
        if (r != words[i])
            words.push_back(r);
    }

    std::vector<Eigen::VectorXcd> images;
    for (const auto& w : words) {
        Eigen::VectorXcd v = vac_vec;
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            v = ev.generator(*it).apply(v);
        images.push_back(v);
    }
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(basis.dim());
    e(index) = 1.0;
    for (size_t i = 0; i < words.size(); ++i) {
        const Complex c = images[i](index);
        if (std::abs(c) < 1e-8)
            continue;
        const double res = (images[i] / c - e).cwiseAbs().maxCoeff();
        if (res <= kDefaultTolerance)
            return {LadderPolynomial::of_word(words[i], 1.0 / c), res};
    }
    // No single word lands on the state: least squares over all of them.
    Eigen::MatrixXcd a(basis.dim(), static_cast<Eigen::Index>(images.size()));
    for (size_t i = 0; i < images.size(); ++i)
        a.col(static_cast<Eigen::Index>(i)) = images[i];
    Eigen::VectorXcd x = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd>(a).solve(e);
    LadderPolynomial poly;
    for (size_t i = 0; i < words.size(); ++i)
        if (std::abs(x(i)) > 1e-12)
            poly += LadderPolynomial::of_word(words[i], x(i));
    const double res = (a * x - e).cwiseAbs().maxCoeff();
    return {std::move(poly), res};
}

int kernel_intersection_dimension(const LadderSet& set, Eigen::VectorXcd* vector)
{
    const int d = set.basis()->dim();
    std::vector<const SparseOperator*> ops;
    for (Charge a : set.particles())
        for (int k = 1; k <= set.n_modes(); ++k)
            for (int j = 0; j < set.count(a); ++j)
                ops.push_back(&set.annihilator(a, k, j));
    Eigen::MatrixXcd stack(static_cast<Eigen::Index>(ops.size()) * d, d);
    for (size_t i = 0; i < ops.size(); ++i)
        stack.middleRows(static_cast<Eigen::Index>(i) * d, d) = ops[i]->dense();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(stack, Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    int kernel = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) < 1e-9)
            ++kernel;
    kernel += d - static_cast<int>(s.size());
    if (vector && kernel >= 1)
        *vector = svd.matrixV().col(d - 1);
    return kernel;
}

// ------------------------------------------------------------------ closure

namespace {

Eigen::VectorXcd vec(const Eigen::MatrixXcd& m) { return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size()); }

} // namespace

ClosureResult algebra_closure(const std::vector<SparseOperator>& generators, int cap)
{
    if (generators.empty())
        throw ArgumentError("closure needs at least one generator");
    const auto& basis = generators.front().basis();
    for (const auto& g : generators)
        if (!g.basis()->same_space(*basis))
            throw ArgumentError("generators must share a basis");
    const int d = basis->dim();
    const Eigen::Index len = static_cast<Eigen::Index>(d) * d;
    ClosureResult out;
    out.basis.resize(len, std::min<Eigen::Index>(len, cap));
    std::vector<Eigen::MatrixXcd> elems;

    auto add = [&](const Eigen::MatrixXcd& m) {
        if (out.dimension >= cap) {
            out.capped = true;
            return;
        }
        Eigen::VectorXcd v = vec(m);
        const double scale = std::max(1.0, v.norm());
        for (int pass = 0; pass < 2; ++pass) {
            auto q = out.basis.leftCols(out.dimension);
            v -= q * (q.adjoint() * v);
        }
        const double nrm = v.norm();
        if (nrm <= 1e-9 * scale)
            return;
        v /= nrm;
        if (out.dimension >= out.basis.cols()) {
            out.capped = true;
            return;
        }
        out.basis.col(out.dimension++) = v;
        elems.push_back(Eigen::Map<Eigen::MatrixXcd>(v.data(), d, d));
    };

    std::vector<Eigen::MatrixXcd> gens;
    for (const auto& g : generators)
        gens.push_back(g.dense());
    add(Eigen::MatrixXcd::Identity(d, d));
    for (size_t i = 0; i < elems.size() && !out.capped; ++i)
        for (const auto& g : gens) {
            Eigen::MatrixXcd prod = g * elems[i];
            add(prod);
        }
    out.basis.conservativeResize(len, out.dimension);
    return out;
}

double span_residual(const ClosureResult& closure, const SparseOperator& op)
{
    Eigen::VectorXcd v = vec(op.dense());
    v -= closure.basis * (closure.basis.adjoint() * v);
    return v.norm();
}

int span_dimension(const std::vector<SparseOperator>& ops)
{
    if (ops.empty())
        return 0;
    const int d = ops.front().dim();
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(ops.size()));
    for (size_t i = 0; i < ops.size(); ++i)
        a.col(static_cast<Eigen::Index>(i)) = vec(ops[i].dense());
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    qr.setThreshold(1e-9);
    return static_cast<int>(qr.rank());
}

} // namespace anyon
