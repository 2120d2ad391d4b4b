#include "anyon/model.hpp"

#include <algorithm>
#include <cmath>

namespace anyon {

bool ValidationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

namespace {

// Boolean checks report the number of violations as their residual.
ValidationCheck count_check(std::string name, int violations)
{
    return {std::move(name), violations == 0, static_cast<double>(violations)};
}

ValidationCheck residual_check(std::string name, double residual, double tolerance)
{
    return {std::move(name), residual <= tolerance, residual};
}

double pentagon_residual(const AnyonModel& m)
{
    const int n = m.num_types();
    double worst = 0.0;
    for (Charge a = 0; a < n; ++a)
        for (Charge b = 0; b < n; ++b)
            for (Charge c = 0; c < n; ++c)
                for (Charge d = 0; d < n; ++d)
                    for (Charge e = 0; e < n; ++e)
                        for (Charge f : m.fuse(a, b))
                            for (Charge g : m.fuse(f, c))
                                for (Charge l : m.fuse(c, d))
                                    for (Charge k : m.fuse(b, l)) {
                                        if (!m.fuses(g, d, e) || !m.fuses(a, k, e))
                                            continue;
                                        Complex lhs = m.f_symbol(f, c, d, e, g, l) * m.f_symbol(a, b, l, e, f, k);
                                        Complex rhs = 0.0;
                                        for (Charge h : m.fuse(b, c))
                                            rhs += m.f_symbol(a, b, c, g, f, h) * m.f_symbol(a, h, d, e, g, k) *
                                                   m.f_symbol(b, c, d, k, h, l);
                                        worst = std::max(worst, std::abs(lhs - rhs));
                                    }
    return worst;
}

// c braided past the pair (a b), either counterclockwise (R) or clockwise (R^-1).
double hexagon_residual(const AnyonModel& m, bool inverse)
{
    const int n = m.num_types();
    auto r = [&](Charge x, Charge y, Charge z) {
        Complex v = m.r_symbol(x, y, z);
        return inverse ? std::conj(v) : v;
    };
    double worst = 0.0;
    for (Charge a = 0; a < n; ++a)
        for (Charge b = 0; b < n; ++b)
            for (Charge c = 0; c < n; ++c)
                for (Charge d = 0; d < n; ++d)
                    for (Charge e : m.fuse(c, a))
                        for (Charge g : m.fuse(c, b)) {
                            if (!m.fuses(e, b, d) || !m.fuses(a, g, d))
                                continue;
                            Complex lhs = r(c, a, e) * m.f_symbol(a, c, b, d, e, g) * r(c, b, g);
                            Complex rhs = 0.0;
                            for (Charge f : m.fuse(a, b))
                                rhs += m.f_symbol(c, a, b, d, e, f) * r(c, f, d) * m.f_symbol(a, b, c, d, f, g);
                            worst = std::max(worst, std::abs(lhs - rhs));
                        }
    return worst;
}

} // namespace

ValidationReport validate_model(const AnyonModel& m, ValidationLevel level, double tolerance)
{
    ValidationReport report;
    report.level = level;
    const int n = m.num_types();
    const Charge e = m.vacuum();

    int vac = 0, dual = 0, comm = 0, order = 0, abel = 0;
    for (Charge a = 0; a < n; ++a) {
        for (Charge b = 0; b < n; ++b) {
            if (m.fuses(e, a, b) != (a == b))
                ++vac;
            if (m.fuses(a, b, e) != (b == m.dual(a)))
                ++dual;
            for (Charge c = 0; c < n; ++c)
                if (m.fuses(a, b, c) != m.fuses(b, a, c))
                    ++comm;
        }
        bool single = true;
        for (Charge b = 0; b < n; ++b)
            if (m.fuse(a, b).size() != 1)
                single = false;
        if (single != m.is_abelian(a))
            ++abel;
        if (a > 0 && m.is_abelian(a) && !m.is_abelian(a - 1))
            ++order;
    }
    report.checks.push_back(count_check("vacuum_law", vac));
    report.checks.push_back(count_check("dual_law", dual));
    report.checks.push_back(count_check("commutativity", comm));
    report.checks.push_back(count_check("abelian_classification", abel));
    report.checks.push_back(count_check("abelian_first_ordering", order));

    double f_dev = 0.0;
    for (const auto& [a, b, c, d] : m.admissible_f_keys()) {
        const FMatrix* fm = m.f_matrix(a, b, c, d);
        const auto k = fm->values.rows();
        f_dev = std::max(f_dev,
                         (fm->values.adjoint() * fm->values - Eigen::MatrixXcd::Identity(k, k)).cwiseAbs().maxCoeff());
    }
    report.checks.push_back(residual_check("f_unitarity", f_dev, tolerance));

    double r_dev = 0.0;
    for (Charge a = 0; a < n; ++a)
        for (Charge b = 0; b < n; ++b)
            for (Charge c : m.fuse(a, b))
                r_dev = std::max(r_dev, std::abs(std::abs(m.r_symbol(a, b, c)) - 1.0));
    report.checks.push_back(residual_check("r_unit_modulus", r_dev, tolerance));

    double q_dev = 0.0;
    for (Charge a = 0; a < n; ++a)
        for (Charge b = 0; b < n; ++b) {
            double sum = 0.0;
            for (Charge c : m.fuse(a, b))
                sum += m.quantum_dim(c);
            q_dev = std::max(q_dev, std::abs(m.quantum_dim(a) * m.quantum_dim(b) - sum));
        }
    report.checks.push_back(residual_check("quantum_dimensions", q_dev, tolerance));

    if (level == ValidationLevel::full) {
        report.checks.push_back(residual_check("pentagon", pentagon_residual(m), tolerance));
        report.checks.push_back(residual_check("hexagon", hexagon_residual(m, false), tolerance));
        report.checks.push_back(residual_check("hexagon_inverse", hexagon_residual(m, true), tolerance));
    }
    return report;
}

} // namespace anyon
