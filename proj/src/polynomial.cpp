#include "anyon/polynomial.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anyon {

LadderPolynomial LadderPolynomial::constant(Complex c) { return of_word({}, c); }

LadderPolynomial LadderPolynomial::of(const Generator& g, Complex c) { return of_word({g}, c); }

LadderPolynomial LadderPolynomial::of_word(const Word& w, Complex c)
{
    LadderPolynomial p;
    p.terms_.push_back({c, w});
    p.canonicalize();
    return p;
}

void LadderPolynomial::canonicalize()
{
    std::map<Word, Complex> acc;
    for (auto& t : terms_)
        acc[std::move(t.word)] += t.coeff;
    terms_.clear();
    for (auto& [w, c] : acc)
        if (std::abs(c) >= kCoefficientCutoff)
            terms_.push_back({c, w});
}

int LadderPolynomial::degree() const
{
    int d = 0;
    for (const auto& t : terms_)
        d = std::max(d, static_cast<int>(t.word.size()));
    return d;
}

std::vector<int> LadderPolynomial::modes() const
{
    std::vector<int> out;
    for (const auto& t : terms_)
        for (const auto& g : t.word)
            out.push_back(g.mode);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

LadderPolynomial LadderPolynomial::adjoint() const
{
    LadderPolynomial p;
    for (const auto& t : terms_) {
        Word w;
        for (auto it = t.word.rbegin(); it != t.word.rend(); ++it)
            w.push_back(it->adjoint());
        p.terms_.push_back({std::conj(t.coeff), std::move(w)});
    }
    p.canonicalize();
    return p;
}

LadderPolynomial LadderPolynomial::relabel_modes(const std::map<int, int>& map) const
{
    LadderPolynomial p = *this;
    for (auto& t : p.terms_)
        for (auto& g : t.word) {
            auto it = map.find(g.mode);
            if (it == map.end())
                throw ArgumentError("mode " + std::to_string(g.mode) + " missing from relabeling map");
            g.mode = it->second;
        }
    p.canonicalize();
    return p;
}

LadderPolynomial& LadderPolynomial::operator+=(const LadderPolynomial& o)
{
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    canonicalize();
    return *this;
}

LadderPolynomial& LadderPolynomial::operator-=(const LadderPolynomial& o)
{
    for (const auto& t : o.terms_)
        terms_.push_back({-t.coeff, t.word});
    canonicalize();
    return *this;
}

LadderPolynomial& LadderPolynomial::operator*=(Complex s)
{
    for (auto& t : terms_)
        t.coeff *= s;
    canonicalize();
    return *this;
}

LadderPolynomial operator*(const LadderPolynomial& a, const LadderPolynomial& b)
{
    LadderPolynomial p;
    p.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) {
            Word w = x.word;
            w.insert(w.end(), y.word.begin(), y.word.end());
            p.terms_.push_back({x.coeff * y.coeff, std::move(w)});
        }
    p.canonicalize();
    return p;
}

namespace {

std::string generator_name(const AnyonModel& m, const Generator& g)
{
    switch (g.kind) {
    case Generator::Kind::alpha:
        return "alpha";
    case Generator::Kind::beta:
        return "beta";
    default:
        return m.label(g.particle);
    }
}

std::string format_coeff(Complex c)
{
    std::ostringstream os;
    os.precision(12);
    if (std::abs(c.imag()) < LadderPolynomial::kCoefficientCutoff)
        os << c.real();
    else if (std::abs(c.real()) < LadderPolynomial::kCoefficientCutoff)
        os << c.imag() << "i";
    else
        os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    return os.str();
}

} // namespace

std::string LadderPolynomial::to_string(const AnyonModel& model) const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    for (size_t i = 0; i < terms_.size(); ++i) {
        const auto& t = terms_[i];
        if (i)
            os << " + ";
        os << format_coeff(t.coeff);
        for (const auto& g : t.word) {
            os << " " << generator_name(model, g) << "[" << g.mode;
            if (g.kind == Generator::Kind::ladder)
                os << "," << g.j;
            os << "]" << (g.dagger ? "+" : "");
        }
    }
    return os.str();
}

std::string LadderPolynomial::to_json(const AnyonModel& model) const
{
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& t : terms_) {
        nlohmann::json word = nlohmann::json::array();
        for (const auto& g : t.word)
            word.push_back(generator_name(model, g) + "|" + std::to_string(g.mode) + "|" + std::to_string(g.j) + "|" +
                           (g.dagger ? "+" : "-"));
        doc.push_back({{"coeff", {t.coeff.real(), t.coeff.imag()}}, {"word", word}});
    }
    return doc.dump(2);
}

LadderPolynomial LadderPolynomial::from_json(const AnyonModel& model, const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("malformed polynomial document: ") + e.what());
    }
    if (!doc.is_array())
        throw ArgumentError("polynomial document must be a list of terms");
    LadderPolynomial p;
    try {
        for (const auto& term : doc) {
            const auto& c = term.at("coeff");
            Term t{{c.at(0).get<double>(), c.at(1).get<double>()}, {}};
            for (const auto& sym : term.at("word")) {
                std::string s = sym.get<std::string>();
                std::vector<std::string> f;
                std::stringstream ss(s);
                for (std::string part; std::getline(ss, part, '|');)
                    f.push_back(part);
                if (f.size() != 4 || (f[3] != "+" && f[3] != "-"))
                    throw ArgumentError("bad generator symbol '" + s + "'");
                Generator g;
                g.mode = std::stoi(f[1]);
                g.j = std::stoi(f[2]);
                g.dagger = f[3] == "+";
                if (model.has_label(f[0])) {
                    g.kind = Generator::Kind::ladder;
                    g.particle = model.index_of(f[0]);
                } else if (f[0] == "alpha") {
                    g.kind = Generator::Kind::alpha;
                } else if (f[0] == "beta") {
                    g.kind = Generator::Kind::beta;
                } else {
                    throw ArgumentError("unknown particle '" + f[0] + "' in generator symbol");
                }
                t.word.push_back(g);
            }
            p.terms_.push_back(std::move(t));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(std::string("malformed polynomial document: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ArgumentError("non-numeric mode or index in polynomial document");
    }
    p.canonicalize();
    return p;
}

// ---------------------------------------------------------------- evaluation

PolynomialEvaluator::PolynomialEvaluator(const LadderSet& set) : set_(set) {}

const SparseOperator& PolynomialEvaluator::generator(const Generator& g) { return word({g}); }

const SparseOperator& PolynomialEvaluator::word(const Word& w)
{
    auto it = cache_.find(w);
    if (it != cache_.end())
        return it->second;
    if (w.empty())
        return cache_.emplace(w, SparseOperator::identity(set_.basis())).first->second;
    if (w.size() == 1) {
        const Generator& g = w[0];
        SparseOperator op(set_.basis());
        if (g.kind == Generator::Kind::ladder) {
            op = g.dagger ? set_.creator(g.particle, g.mode, g.j) : set_.annihilator(g.particle, g.mode, g.j);
        } else {
            auto [alpha, beta] = fibonacci_pair(set_, g.mode);
            op = g.kind == Generator::Kind::alpha ? alpha : beta;
            if (g.dagger)
                op = op.adjoint();
        }
        return cache_.emplace(w, std::move(op)).first->second;
    }
    // Split off the last symbol so shared prefixes are reused.
    Word head(w.begin(), w.end() - 1);
    SparseOperator prod = word(head) * word({w.back()});
    return cache_.emplace(w, std::move(prod)).first->second;
}

SparseOperator PolynomialEvaluator::evaluate(const LadderPolynomial& p)
{
    SparseOperator::Matrix acc(set_.basis()->dim(), set_.basis()->dim());
    for (const auto& t : p.terms())
        acc += word(t.word).matrix() * t.coeff;
    return SparseOperator(set_.basis(), std::move(acc));
}

SparseOperator evaluate(const LadderPolynomial& p, const LadderSet& set)
{
    PolynomialEvaluator ev(set);
    return ev.evaluate(p);
}

} // namespace anyon
