#include "anyon/fusion_basis.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace anyon {

// ---------------------------------------------------------------- TreeShape

TreeShape::TreeShape(int leaves) : leaves_(leaves), nodes_(std::max(leaves - 1, 0)), range_to_split_(leaves * leaves, -1)
{
    if (leaves < 1)
        throw ArgumentError("a tree needs at least one leaf");
}

int TreeShape::split_of(int lo, int hi) const
{
    if (lo < 0 || hi >= leaves_ || lo >= hi)
        return -1;
    return range_to_split_[lo * leaves_ + hi];
}

TreeShape TreeShape::left_comb(int leaves)
{
    TreeShape t(leaves);
    for (int s = 0; s + 1 < leaves; ++s) {
        t.nodes_[s] = {0, s + 1};
        t.range_to_split_[0 * leaves + s + 1] = s;
    }
    return t;
}

TreeShape TreeShape::right_comb(int leaves)
{
    TreeShape t(leaves);
    for (int s = 0; s + 1 < leaves; ++s) {
        t.nodes_[s] = {s, leaves - 1};
        t.range_to_split_[s * leaves + leaves - 1] = s;
    }
    return t;
}

namespace {

std::string comb_string(int lo, int hi)
{
    std::string cur = std::to_string(lo + 1);
    for (int i = lo + 1; i <= hi; ++i)
        cur = "(" + cur + " " + std::to_string(i + 1) + ")";
    return cur;
}

} // namespace

TreeShape TreeShape::left_comb_with_pair(int leaves, int k)
{
    if (k < 0 || k + 1 >= leaves)
        throw ArgumentError("pair position out of range");
    std::string pair = "(" + std::to_string(k + 1) + " " + std::to_string(k + 2) + ")";
    std::string cur = k == 0 ? pair : comb_string(0, k - 1);
    if (k > 0)
        cur = "(" + cur + " " + pair + ")";
    for (int i = k + 2; i < leaves; ++i)
        cur = "(" + cur + " " + std::to_string(i + 1) + ")";
    return parse(cur);
}

TreeShape TreeShape::first_leaf_split(int leaves)
{
    if (leaves == 1)
        return left_comb(1);
    return parse("(1 " + comb_string(1, leaves - 1) + ")");
}

TreeShape TreeShape::prefix_split(int leaves, int m)
{
    if (m < 1 || m > leaves)
        throw ArgumentError("prefix length out of range");
    if (m == leaves)
        return left_comb(leaves);
    return parse("(" + comb_string(0, m - 1) + " " + comb_string(m, leaves - 1) + ")");
}

TreeShape TreeShape::parse(const std::string& text)
{
    // Recursive descent over "(x y)" | integer.
    struct Parsed {
        int lo, hi;
    };
    std::vector<std::tuple<int, int, int>> nodes;
    std::vector<int> leaf_order;
    size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    std::function<Parsed()> parse_tree = [&]() -> Parsed {
        skip();
        if (pos >= text.size())
            throw ArgumentError("unexpected end of tree shape '" + text + "'");
        if (text[pos] == '(') {
            ++pos;
            Parsed l = parse_tree();
            skip();
            if (pos < text.size() && text[pos] == ',')
                ++pos;
            Parsed r = parse_tree();
            skip();
            if (pos >= text.size() || text[pos] != ')')
                throw ArgumentError("expected ')' in tree shape '" + text + "'");
            ++pos;
            if (l.hi + 1 != r.lo)
                throw ArgumentError("tree shape '" + text + "' permutes leaves; recoupling never permutes leaves");
            nodes.emplace_back(l.lo, r.hi, l.hi);
            return {l.lo, r.hi};
        }
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (start == pos)
            throw ArgumentError("bad token in tree shape '" + text + "'");
        int leaf = std::stoi(text.substr(start, pos - start)) - 1;
        leaf_order.push_back(leaf);
        return {leaf, leaf};
    };
    Parsed root = parse_tree();
    skip();
    if (pos != text.size())
        throw ArgumentError("trailing characters in tree shape '" + text + "'");
    const int n = static_cast<int>(leaf_order.size());
    for (int i = 0; i < n; ++i)
        if (leaf_order[i] != i)
            throw ArgumentError("tree shape '" + text + "' permutes leaves; recoupling never permutes leaves");
    if (root.lo != 0 || root.hi != n - 1)
        throw ArgumentError("tree shape '" + text + "' is malformed");
    TreeShape t(n);
    for (auto [lo, hi, split] : nodes) {
        t.nodes_[split] = {lo, hi};
        t.range_to_split_[lo * n + hi] = split;
    }
    return t;
}

void TreeShape::rotate_right(int x)
{
    const Node X = nodes_.at(x);
    const int y = split_of(X.lo, x);
    if (y < 0)
        throw ArgumentError("rotate_right needs an internal left child");
    range_to_split_[X.lo * leaves_ + x] = -1;
    nodes_[y] = {X.lo, X.hi};
    nodes_[x] = {y + 1, X.hi};
    range_to_split_[X.lo * leaves_ + X.hi] = y;
    range_to_split_[(y + 1) * leaves_ + X.hi] = x;
}

void TreeShape::rotate_left(int x)
{
    const Node X = nodes_.at(x);
    const int z = split_of(x + 1, X.hi);
    if (z < 0)
        throw ArgumentError("rotate_left needs an internal right child");
    range_to_split_[(x + 1) * leaves_ + X.hi] = -1;
    nodes_[z] = {X.lo, X.hi};
    nodes_[x] = {X.lo, z};
    range_to_split_[X.lo * leaves_ + X.hi] = z;
    range_to_split_[X.lo * leaves_ + z] = x;
}

std::string TreeShape::subtree_string(int lo, int hi) const
{
    if (lo == hi)
        return std::to_string(lo + 1);
    int s = split_of(lo, hi);
    return "(" + subtree_string(lo, s) + " " + subtree_string(s + 1, hi) + ")";
}

std::string TreeShape::to_string() const { return subtree_string(0, leaves_ - 1); }

bool TreeShape::operator==(const TreeShape& other) const
{
    return leaves_ == other.leaves_ && range_to_split_ == other.range_to_split_;
}

// ---------------------------------------------------------- FusionTreeBasis

namespace {

struct Partial {
    Charge charge;
    std::vector<std::pair<int, Charge>> leaves;
    std::vector<std::pair<int, Charge>> internal;
};

std::vector<Partial> enumerate_subtree(const AnyonModel& m, const TreeShape& shape, int lo, int hi)
{
    std::vector<Partial> out;
    if (lo == hi) {
        for (Charge a = 0; a < m.num_types(); ++a)
            out.push_back({a, {{lo, a}}, {}});
        return out;
    }
    const int s = shape.split_of(lo, hi);
    auto left = enumerate_subtree(m, shape, lo, s);
    auto right = enumerate_subtree(m, shape, s + 1, hi);
    for (const auto& l : left)
        for (const auto& r : right)
            for (Charge c : m.fuse(l.charge, r.charge)) {
                Partial p{c, l.leaves, l.internal};
                p.leaves.insert(p.leaves.end(), r.leaves.begin(), r.leaves.end());
                p.internal.insert(p.internal.end(), r.internal.begin(), r.internal.end());
                p.internal.emplace_back(s, c);
                out.push_back(std::move(p));
            }
    return out;
}

std::vector<Charge> state_key(const std::vector<Charge>& leaves, const std::vector<Charge>& internal)
{
    std::vector<Charge> key(leaves);
    key.insert(key.end(), internal.begin(), internal.end());
    return key;
}

} // namespace

FusionTreeBasis::FusionTreeBasis(ModelPtr model, TreeShape shape, std::optional<Charge> sector)
    : model_(std::move(model)), shape_(std::move(shape)), sector_(sector)
{
    const int n = shape_.num_leaves();
    if (sector_ && (*sector_ < 0 || *sector_ >= model_->num_types()))
        throw ArgumentError("sector charge out of range");
    for (auto& p : enumerate_subtree(*model_, shape_, 0, n - 1)) {
        if (sector_ && p.charge != *sector_)
            continue;
        FusionTreeState st;
        st.leaves.assign(n, 0);
        st.internal.assign(n - 1, 0);
        for (auto [i, a] : p.leaves)
            st.leaves[i] = a;
        for (auto [s, c] : p.internal)
            st.internal[s] = c;
        st.total = p.charge;
        states_.push_back(std::move(st));
    }
    std::sort(states_.begin(), states_.end(), [](const FusionTreeState& a, const FusionTreeState& b) {
        return std::tie(a.total, a.leaves, a.internal) < std::tie(b.total, b.leaves, b.internal);
    });
    for (int i = 0; i < dim(); ++i)
        index_.emplace(state_key(states_[i].leaves, states_[i].internal), i);
}

int FusionTreeBasis::index_of(const std::vector<Charge>& leaves, const std::vector<Charge>& internal) const
{
    auto it = index_.find(state_key(leaves, internal));
    return it == index_.end() ? -1 : it->second;
}

Charge FusionTreeBasis::subtree_charge(const FusionTreeState& s, int lo, int hi) const
{
    if (lo == hi)
        return s.leaves[lo];
    return s.internal[shape_.split_of(lo, hi)];
}

bool FusionTreeBasis::same_space(const FusionTreeBasis& other) const
{
    return model_ == other.model_ && shape_ == other.shape_ && sector_ == other.sector_;
}

std::string FusionTreeBasis::describe() const
{
    std::ostringstream os;
    os << "model=" << model_->name() << " n_modes=" << n_modes()
       << " sector=" << (sector_ ? model_->label(*sector_) : std::string("all")) << " shape=" << shape_.to_string()
       << " ordering=lex-total-leaves-internal-v1";
    return os.str();
}

BasisPtr enumerate_basis(const ModelPtr& model, int n_modes, std::optional<Charge> sector)
{
    if (n_modes < 1)
        throw ArgumentError("n_modes must be at least 1");
    return std::make_shared<const FusionTreeBasis>(model, TreeShape::left_comb(n_modes), sector);
}

BasisPtr shape_basis(const ModelPtr& model, const TreeShape& shape, std::optional<Charge> sector)
{
    return std::make_shared<const FusionTreeBasis>(model, shape, sector);
}

// --------------------------------------------------------------- recoupling

namespace {

struct Move {
    int split;
    bool right;
};

// Rotations turning the node spanning [lo, hi] into one split at t.
void make_split(TreeShape& cur, int lo, int hi, int t, std::vector<Move>& moves)
{
    const int c = cur.split_of(lo, hi);
    if (c == t)
        return;
    if (c > t) {
        make_split(cur, lo, c, t, moves);
        cur.rotate_right(c);
        moves.push_back({c, true});
    } else {
        make_split(cur, c + 1, hi, t, moves);
        cur.rotate_left(c);
        moves.push_back({c, false});
    }
}

void align(TreeShape& cur, const TreeShape& target, int lo, int hi, std::vector<Move>& moves)
{
    if (lo >= hi)
        return;
    const int t = target.split_of(lo, hi);
    make_split(cur, lo, hi, t, moves);
    align(cur, target, lo, t, moves);
    align(cur, target, t + 1, hi, moves);
}

using Labelled = std::map<std::vector<Charge>, Complex>;

Charge charge_in(const TreeShape& shape, const std::vector<Charge>& key, int n, int lo, int hi)
{
    if (lo == hi)
        return key[lo];
    return key[n + shape.split_of(lo, hi)];
}

// Applies one F-move to a vector of labelled trees expressed in `shape`.
Labelled apply_move(const AnyonModel& m, const TreeShape& shape, const Move& mv, const Labelled& in)
{
    const int n = shape.num_leaves();
    Labelled out;
    const auto X = shape.node(mv.split);
    if (mv.right) {
        const int x = mv.split;
        const int y = shape.split_of(X.lo, x);
        for (const auto& [key, amp] : in) {
            Charge a = charge_in(shape, key, n, X.lo, y);
            Charge b = charge_in(shape, key, n, y + 1, x);
            Charge c = charge_in(shape, key, n, x + 1, X.hi);
            Charge d = key[n + x];
            Charge e = key[n + y];
            for (Charge f : m.fuse(b, c)) {
                Complex w = m.f_symbol(a, b, c, d, e, f);
                if (w == Complex(0.0))
                    continue;
                auto nk = key;
                nk[n + y] = d;
                nk[n + x] = f;
                out[nk] += amp * w;
            }
        }
    } else {
        const int x = mv.split;
        const int z = shape.split_of(x + 1, X.hi);
        for (const auto& [key, amp] : in) {
            Charge a = charge_in(shape, key, n, X.lo, x);
            Charge b = charge_in(shape, key, n, x + 1, z);
            Charge c = charge_in(shape, key, n, z + 1, X.hi);
            Charge d = key[n + x];
            Charge f = key[n + z];
            for (Charge e : m.fuse(a, b)) {
                Complex w = std::conj(m.f_symbol(a, b, c, d, e, f));
                if (w == Complex(0.0))
                    continue;
                auto nk = key;
                nk[n + z] = d;
                nk[n + x] = e;
                out[nk] += amp * w;
            }
        }
    }
    return out;
}

} // namespace

BasisChange recouple(const BasisPtr& basis, const TreeShape& target)
{
    const int n = basis->n_modes();
    if (target.num_leaves() != n)
        throw ArgumentError("target shape has the wrong number of leaves");
    const AnyonModel& m = basis->model();

    TreeShape cur = basis->shape();
    std::vector<Move> moves;
    align(cur, target, 0, n - 1, moves);

    auto to = shape_basis(basis->model_ptr(), target, basis->sector());
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int col = 0; col < basis->dim(); ++col) {
        const auto& st = basis->state(col);
        Labelled vec;
        vec[state_key(st.leaves, st.internal)] = 1.0;
        TreeShape walk = basis->shape();
        for (const auto& mv : moves) {
            vec = apply_move(m, walk, mv, vec);
            if (mv.right)
                walk.rotate_right(mv.split);
            else
                walk.rotate_left(mv.split);
        }
        for (const auto& [key, amp] : vec) {
            if (std::abs(amp) <= kDropTolerance)
                continue;
            std::vector<Charge> leaves(key.begin(), key.begin() + n);
            std::vector<Charge> internal(key.begin() + n, key.end());
            int row = to->index_of(leaves, internal);
            if (row < 0)
                throw std::logic_error("recoupling produced a state outside the target basis");
            trips.emplace_back(row, col, amp);
        }
    }
    SparseOperator::Matrix mat(to->dim(), basis->dim());
    mat.setFromTriplets(trips.begin(), trips.end());
    prune_matrix(mat);
    return {basis, to, std::move(mat)};
}

SparseOperator braid_adjacent(const BasisPtr& basis, int k, BraidSense sense)
{
    const int n = basis->n_modes();
    if (k < 1 || k > n - 1)
        throw ArgumentError("braid position k=" + std::to_string(k) + " out of range for " + std::to_string(n) +
                            " modes");
    const AnyonModel& m = basis->model();
    const int p = k - 1; // 0-based left leaf of the pair
    auto change = recouple(basis, TreeShape::left_comb_with_pair(n, p));
    const auto& pb = *change.to;
    const int pair_split = pb.shape().split_of(p, p + 1);

    std::vector<Eigen::Triplet<Complex>> trips;
    for (int col = 0; col < pb.dim(); ++col) {
        const auto& st = pb.state(col);
        Charge a = st.leaves[p], b = st.leaves[p + 1], x = st.internal[pair_split];
        Complex phase = sense == BraidSense::over ? m.r_symbol(a, b, x) : std::conj(m.r_symbol(b, a, x));
        auto leaves = st.leaves;
        std::swap(leaves[p], leaves[p + 1]);
        int row = pb.index_of(leaves, st.internal);
        trips.emplace_back(row, col, phase);
    }
    SparseOperator::Matrix d(pb.dim(), pb.dim());
    d.setFromTriplets(trips.begin(), trips.end());
    SparseOperator::Matrix v = change.matrix;
    SparseOperator::Matrix out = SparseOperator::Matrix(v.adjoint()) * d * v;
    return SparseOperator(basis, std::move(out));
}

SparseOperator total_charge_projector(const BasisPtr& basis, Charge g)
{
    if (g < 0 || g >= basis->model().num_types())
        throw ArgumentError("charge out of range");
    std::vector<Eigen::Triplet<Complex>> trips;
    for (int i = 0; i < basis->dim(); ++i)
        if (basis->state(i).total == g)
            trips.emplace_back(i, i, 1.0);
    SparseOperator::Matrix m(basis->dim(), basis->dim());
    m.setFromTriplets(trips.begin(), trips.end());
    return SparseOperator(basis, std::move(m));
}

std::vector<Charge> present_charges(const FusionTreeBasis& basis)
{
    std::vector<Charge> out;
    for (const auto& s : basis.states())
        if (std::find(out.begin(), out.end(), s.total) == out.end())
            out.push_back(s.total);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace anyon
