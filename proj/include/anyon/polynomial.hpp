#pragma once

#include "anyon/ladder.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace anyon {

/// One symbol of a ladder word: alpha^{(j)}_k of a particle (kind ladder),
/// or the unnormalised Fibonacci alpha_k / beta_k. `dagger` marks creation.
struct Generator {
    enum class Kind { ladder, alpha, beta };

    Kind kind = Kind::ladder;
    Charge particle = 0;
    int mode = 1;
    int j = 0;
    bool dagger = false;

    static Generator ladder(Charge a, int k, int j, bool dagger = false) { return {Kind::ladder, a, k, j, dagger}; }
    static Generator alpha(int k, bool dagger = false) { return {Kind::alpha, 0, k, 0, dagger}; }
    static Generator beta(int k, bool dagger = false) { return {Kind::beta, 0, k, 0, dagger}; }

    Generator adjoint() const
    {
        Generator g = *this;
        g.dagger = !g.dagger;
        return g;
    }
    /// Sort key: mode, then particle, then j, daggers last.
    auto key() const { return std::make_tuple(mode, static_cast<int>(kind), particle, j, dagger); }
    bool operator<(const Generator& o) const { return key() < o.key(); }
    bool operator==(const Generator& o) const { return key() == o.key(); }
};

using Word = std::vector<Generator>;

/// Finite sum of complex multiples of ladder words.
///
/// Kept in canonical form: words ordered lexicographically by generator
/// key, like terms merged, coefficients with magnitude below 1e-12 dropped.
/// Words are never reordered internally (the generators do not commute).
class LadderPolynomial {
public:
    struct Term {
        Complex coeff;
        Word word;
    };

    static constexpr double kCoefficientCutoff = 1e-12;

    LadderPolynomial() = default;
    static LadderPolynomial constant(Complex c);
    static LadderPolynomial of(const Generator& g, Complex c = 1.0);
    static LadderPolynomial of_word(const Word& w, Complex c = 1.0);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    int degree() const;
    /// Modes referenced by any generator, sorted.
    std::vector<int> modes() const;

    LadderPolynomial adjoint() const;
    /// Replaces every generator mode k with map.at(k).
    LadderPolynomial relabel_modes(const std::map<int, int>& map) const;

    LadderPolynomial& operator+=(const LadderPolynomial& o);
    LadderPolynomial& operator-=(const LadderPolynomial& o);
    LadderPolynomial& operator*=(Complex s);
    friend LadderPolynomial operator+(LadderPolynomial a, const LadderPolynomial& b) { return a += b; }
    friend LadderPolynomial operator-(LadderPolynomial a, const LadderPolynomial& b) { return a -= b; }
    friend LadderPolynomial operator*(LadderPolynomial a, Complex s) { return a *= s; }
    friend LadderPolynomial operator*(Complex s, LadderPolynomial a) { return a *= s; }
    friend LadderPolynomial operator*(const LadderPolynomial& a, const LadderPolynomial& b);

    std::string to_string(const AnyonModel& model) const;
    /// [{"coeff": [re, im], "word": ["a|k|j|+", ...]}, ...]; "+" marks a
    /// creation operator, "-" an annihilation operator. The Fibonacci pair
    /// uses the particle names "alpha" and "beta" with j = 0.
    std::string to_json(const AnyonModel& model) const;
    static LadderPolynomial from_json(const AnyonModel& model, const std::string& text);

private:
    void canonicalize();
    std::vector<Term> terms_;
};

/// Evaluates polynomials against a LadderSet, caching every word product so
/// repeated evaluations share work. Not thread-safe.
class PolynomialEvaluator {
public:
    explicit PolynomialEvaluator(const LadderSet& set);

    const SparseOperator& generator(const Generator& g);
    const SparseOperator& word(const Word& w);
    SparseOperator evaluate(const LadderPolynomial& p);

private:
    const LadderSet& set_;
    std::map<Word, SparseOperator> cache_;
};

SparseOperator evaluate(const LadderPolynomial& p, const LadderSet& set);

} // namespace anyon
