#include "anyon/fusion_basis.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace anyon;

namespace {

TreeShape random_shape(std::mt19937& rng, int n)
{
    std::function<std::string(int, int)> build = [&](int lo, int hi) -> std::string {
        if (lo == hi)
            return std::to_string(lo + 1);
        std::uniform_int_distribution<int> pick(lo, hi - 1);
        int s = pick(rng);
        return "(" + build(lo, s) + " " + build(s + 1, hi) + ")";
    };
    return TreeShape::parse(build(0, n - 1));
}

double unitarity_defect(const SparseOperator::Matrix& u)
{
    SparseOperator::Matrix id(u.cols(), u.cols());
    id.setIdentity();
    SparseOperator::Matrix d = SparseOperator::Matrix(u.adjoint()) * u - id;
    double worst = 0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(d, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

double max_entry_diff(const SparseOperator::Matrix& a, const SparseOperator::Matrix& b)
{
    SparseOperator::Matrix d = a - b;
    double worst = 0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseOperator::Matrix::InnerIterator it(d, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

} // namespace

TEST_CASE("tree shapes parse and print")
{
    CHECK(TreeShape::left_comb(4).to_string() == "(((1 2) 3) 4)");
    CHECK(TreeShape::right_comb(4).to_string() == "(1 (2 (3 4)))");
    CHECK(TreeShape::left_comb_with_pair(4, 2).to_string() == "((1 2) (3 4))");
    CHECK(TreeShape::left_comb_with_pair(4, 1).to_string() == "((1 (2 3)) 4)");
    CHECK(TreeShape::first_leaf_split(4).to_string() == "(1 ((2 3) 4))");
    CHECK(TreeShape::prefix_split(5, 2).to_string() == "((1 2) ((3 4) 5))");
    CHECK(TreeShape::parse("((1 2) (3 4))") == TreeShape::left_comb_with_pair(4, 2));
    CHECK_THROWS_AS(TreeShape::parse("((2 1) 3)"), ArgumentError);
    CHECK_THROWS_AS(TreeShape::parse("((1 3) 2)"), ArgumentError);
    CHECK_THROWS_AS(TreeShape::parse("((1 2) 3"), ArgumentError);

    auto t = TreeShape::left_comb(3);
    t.rotate_right(1);
    CHECK(t.to_string() == "(1 (2 3))");
    t.rotate_left(0);
    CHECK(t == TreeShape::left_comb(3));
}

TEST_CASE("fibonacci dimensions follow the known sequence")
{
    auto fib = share(builtin("fibonacci"));
    const std::vector<int> expected{2, 5, 13, 34, 89, 233};
    for (int n = 1; n <= 6; ++n)
        CHECK(enumerate_basis(fib, n)->dim() == expected[n - 1]);
    // First basis states of two modes in label order.
    auto b2 = enumerate_basis(fib, 2);
    CHECK(b2->state(0).leaves == std::vector<Charge>{0, 0});
    CHECK(b2->state(0).total == 0);
    CHECK(b2->state(1).leaves == std::vector<Charge>{1, 1});
    CHECK(b2->state(1).total == 0);
}

TEST_CASE("dimensions agree with path counting")
{
    for (const auto& name : builtin_names()) {
        auto m = share(builtin(name));
        for (int n = 1; n <= 8; ++n) {
            INFO(name << " n=" << n);
            CHECK(enumerate_basis(m, n)->dim() == oracle::path_count(*m, n));
            long by_sector = 0;
            for (Charge g = 0; g < m->num_types(); ++g)
                by_sector += enumerate_basis(m, n, g)->dim();
            CHECK(by_sector == oracle::path_count(*m, n));
        }
    }
}

TEST_CASE("basis is consistent across shapes")
{
    auto ising = share(builtin("ising"));
    auto a = shape_basis(ising, TreeShape::parse("((1 2) (3 4))"));
    CHECK(a->dim() == enumerate_basis(ising, 4)->dim());
    for (int i = 0; i < a->dim(); ++i)
        CHECK(a->index_of(a->state(i)) == i);
    CHECK(a->describe().find("shape=((1 2) (3 4))") != std::string::npos);
    CHECK_THROWS_AS(enumerate_basis(ising, 0), ArgumentError);
}

TEST_CASE("recoupling is unitary and round-trips on random shapes")
{
    std::mt19937 rng(7);
    for (const auto& name : builtin_names()) {
        auto m = share(builtin(name));
        for (int n = 2; n <= 7; ++n)
            for (int trial = 0; trial < 4; ++trial) {
                auto s1 = random_shape(rng, n);
                auto s2 = random_shape(rng, n);
                INFO(name << " " << s1.to_string() << " -> " << s2.to_string());
                auto b1 = shape_basis(m, s1);
                auto fwd = recouple(b1, s2);
                CHECK(fwd.to->shape() == s2);
                CHECK(unitarity_defect(fwd.matrix) < 1e-12);
                auto back = recouple(fwd.to, s1);
                SparseOperator::Matrix id(b1->dim(), b1->dim());
                id.setIdentity();
                CHECK(max_entry_diff(back.matrix * fwd.matrix, id) < 1e-12);
                // Paths through a third shape agree with the direct one.
                auto s3 = random_shape(rng, n);
                auto first = recouple(b1, s3);
                auto via = recouple(first.to, s2);
                CHECK(max_entry_diff(via.matrix * first.matrix, fwd.matrix) < 1e-12);
            }
    }
}

TEST_CASE("single F-move reproduces the F block")
{
    auto fib = share(builtin("fibonacci"));
    auto b = enumerate_basis(fib, 3, 1);
    auto ch = recouple(b, TreeShape::right_comb(3));
    const auto& f = fib->f_matrix(1, 1, 1, 1)->values;
    // |((t t)_e t)_t> and |((t t)_t t)_t> against |(t (t t)_f)_t>
    for (Charge e : {0, 1})
        for (Charge ff : {0, 1}) {
            int col = b->index_of({1, 1, 1}, {e, 1});
            int row = ch.to->index_of({1, 1, 1}, {1, ff});
            REQUIRE(col >= 0);
            REQUIRE(row >= 0);
            CHECK(std::abs(ch.matrix.coeff(row, col) - f(e, ff)) < 1e-15);
        }
}

TEST_CASE("braids match the dense F R F oracle")
{
    for (const auto& name : builtin_names()) {
        auto m = share(builtin(name));
        for (int n = 2; n <= 5; ++n) {
            auto b = enumerate_basis(m, n);
            for (int k = 1; k < n; ++k) {
                INFO(name << " n=" << n << " k=" << k);
                auto br = braid_adjacent(b, k);
                auto oracle = oracle::dense_braid(*b, k);
                CHECK((br.dense() - oracle).cwiseAbs().maxCoeff() < 1e-12);
                CHECK(unitarity_defect(br.matrix()) < 1e-12);
                auto under = braid_adjacent(b, k, BraidSense::under);
                CHECK(max_abs_diff(under, br.adjoint()) < 1e-12);
                CHECK(br.is_charge_block_diagonal());
            }
        }
    }
    CHECK_THROWS_AS(braid_adjacent(enumerate_basis(share(builtin("fibonacci")), 3), 3), ArgumentError);
}

TEST_CASE("braids satisfy Yang-Baxter and far commutation")
{
    for (const auto& name : builtin_names()) {
        auto m = share(builtin(name));
        auto b = enumerate_basis(m, 5);
        std::vector<SparseOperator> B;
        for (int k = 1; k < 5; ++k)
            B.push_back(braid_adjacent(b, k));
        for (int k = 0; k + 1 < 4; ++k)
            CHECK(max_abs_diff(B[k] * B[k + 1] * B[k], B[k + 1] * B[k] * B[k + 1]) < 1e-12);
        CHECK(commutator(B[0], B[2]).is_zero(1e-12));
        CHECK(commutator(B[0], B[3]).is_zero(1e-12));
        CHECK(commutator(B[1], B[3]).is_zero(1e-12));
    }
}

TEST_CASE("fermion exchange is a sign")
{
    auto f = share(builtin("fermion"));
    auto b = enumerate_basis(f, 2);
    auto br = braid_adjacent(b, 1);
    int pp = b->index_of({1, 1}, {0});
    CHECK(br.coeff(pp, pp) == Complex(-1.0));
}

TEST_CASE("sparse operator algebra")
{
    auto fib = share(builtin("fibonacci"));
    auto b = enumerate_basis(fib, 3);
    auto id = SparseOperator::identity(b);
    CHECK(id.nonzeros() == 13);
    Complex sum_proj = 0;
    SparseOperator total(b);
    for (Charge g : present_charges(*b))
        total += total_charge_projector(b, g);
    CHECK(max_abs_diff(total, id) == 0.0);
    auto tiny = id * Complex(1e-15);
    CHECK(tiny.nonzeros() == 0);
    CHECK(id.is_hermitian());
    CHECK((id - id).is_zero());
    CHECK(anticommutator(id, id).max_abs() == doctest::Approx(2.0));
    (void)sum_proj;
    auto other = enumerate_basis(fib, 4);
    CHECK_THROWS_AS(id + SparseOperator::identity(other), ArgumentError);
}
