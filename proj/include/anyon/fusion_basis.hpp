#pragma once

#include "anyon/model.hpp"
#include "anyon/sparse_operator.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace anyon {

using ModelPtr = std::shared_ptr<const AnyonModel>;

inline ModelPtr share(AnyonModel model) { return std::make_shared<const AnyonModel>(std::move(model)); }

/// Full binary tree over leaves 0..N-1 in fixed left-to-right order.
///
/// Every internal node is identified by its split point s: the node whose
/// left subtree ends at leaf s and whose right subtree starts at leaf s+1.
/// A tree on N leaves has exactly one node per split s in [0, N-2], which
/// gives a shape-independent index for internal charges.
class TreeShape {
public:
    struct Node {
        int lo = 0;
        int hi = 0;
    };

    /// ((..((1 2) 3) ..) N): the canonical left-fusion shape.
    static TreeShape left_comb(int leaves);
    /// (1 (2 (.. (N-1 N)..))).
    static TreeShape right_comb(int leaves);
    /// Left comb in which leaves k and k+1 (0-based) are fused first.
    static TreeShape left_comb_with_pair(int leaves, int k);
    /// (leaf 0, left comb over leaves 1..N-1).
    static TreeShape first_leaf_split(int leaves);
    /// (left comb over 0..m-1, left comb over m..N-1); m == N gives the left comb.
    static TreeShape prefix_split(int leaves, int m);
    /// Parses a parenthesization such as "((1 2) (3 4))" with 1-based
    /// leaves. Throws ArgumentError when leaves are missing or permuted.
    static TreeShape parse(const std::string& text);

    int num_leaves() const { return leaves_; }
    /// Split of the root node; -1 for a single leaf.
    int root() const { return leaves_ > 1 ? split_of(0, leaves_ - 1) : -1; }
    const Node& node(int split) const { return nodes_.at(split); }
    /// Split of the internal node spanning [lo, hi], or -1 if none.
    int split_of(int lo, int hi) const;

    void rotate_right(int split);
    void rotate_left(int split);

    std::string to_string() const;
    bool operator==(const TreeShape& other) const;

private:
    explicit TreeShape(int leaves);
    std::string subtree_string(int lo, int hi) const;

    int leaves_ = 0;
    std::vector<Node> nodes_;
    std::vector<int> range_to_split_;
};

/// One labelled fusion tree: particle per leaf and one internal charge per
/// split point. For the canonical left comb internal[s] is d_{s+1}, the
/// fusion of leaves 0..s+1.
struct FusionTreeState {
    std::vector<Charge> leaves;
    std::vector<Charge> internal;
    Charge total = 0;

    bool operator==(const FusionTreeState&) const = default;
};

/// Ordered orthonormal basis of labelled trees for one shape.
///
/// Ordering is lexicographic in (total, leaves, internal charges by split)
/// using model label order.
class FusionTreeBasis {
public:
    FusionTreeBasis(ModelPtr model, TreeShape shape, std::optional<Charge> sector = std::nullopt);

    const AnyonModel& model() const { return *model_; }
    const ModelPtr& model_ptr() const { return model_; }
    const TreeShape& shape() const { return shape_; }
    int n_modes() const { return shape_.num_leaves(); }
    std::optional<Charge> sector() const { return sector_; }
    int dim() const { return static_cast<int>(states_.size()); }
    const std::vector<FusionTreeState>& states() const { return states_; }
    const FusionTreeState& state(int i) const { return states_.at(i); }

    /// Position of a state, or -1 when it is not in the basis.
    int index_of(const std::vector<Charge>& leaves, const std::vector<Charge>& internal) const;
    int index_of(const FusionTreeState& s) const { return index_of(s.leaves, s.internal); }

    /// Charge carried by the subtree spanning leaves [lo, hi] in state i.
    Charge subtree_charge(const FusionTreeState& s, int lo, int hi) const;

    bool same_space(const FusionTreeBasis& other) const;
    std::string describe() const;

private:
    ModelPtr model_;
    TreeShape shape_;
    std::optional<Charge> sector_;
    std::vector<FusionTreeState> states_;
    std::map<std::vector<Charge>, int> index_;
};

using BasisPtr = std::shared_ptr<const FusionTreeBasis>;

/// Canonical left-fusion basis for n_modes particles.
BasisPtr enumerate_basis(const ModelPtr& model, int n_modes, std::optional<Charge> sector = std::nullopt);
BasisPtr shape_basis(const ModelPtr& model, const TreeShape& shape, std::optional<Charge> sector = std::nullopt);

/// Unitary change of basis: matrix maps coordinates in `from` to
/// coordinates in `to` (rows index `to`).
struct BasisChange {
    BasisPtr from;
    BasisPtr to;
    SparseOperator::Matrix matrix;
};

/// Change of basis from `basis` (any shape) to `target`, composed from
/// elementary F-moves along a deterministic rotation path.
BasisChange recouple(const BasisPtr& basis, const TreeShape& target);

enum class BraidSense { over, under };

/// Exchange of modes k and k+1 (1-based k) in the canonical basis.
/// `over` applies R^{ab}_c, `under` is its adjoint.
SparseOperator braid_adjacent(const BasisPtr& basis, int k, BraidSense sense = BraidSense::over);

/// Diagonal projector onto total charge g.
SparseOperator total_charge_projector(const BasisPtr& basis, Charge g);

/// Charges g for which the basis has at least one state.
std::vector<Charge> present_charges(const FusionTreeBasis& basis);

} // namespace anyon
