#include "anyon/model.hpp"

#include <cmath>
#include <numbers>

namespace anyon {

namespace {

Eigen::MatrixXcd scalar(Complex v)
{
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = v;
    return m;
}

Complex phase(double angle) { return std::polar(1.0, angle); }

ModelData fibonacci_data()
{
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double inv_phi = 1.0 / phi;
    const double inv_sqrt_phi = 1.0 / std::sqrt(phi);

    ModelData d;
    d.name = "fibonacci";
    d.labels = {"e", "tau"};
    d.vacuum = "e";
    d.dual = {{"e", "e"}, {"tau", "tau"}};
    d.fusion = {{"tau", "tau", "e"}, {"tau", "tau", "tau"}};

    Eigen::MatrixXcd f(2, 2);
    f << inv_phi, inv_sqrt_phi, inv_sqrt_phi, -inv_phi;
    d.f_symbols[{"tau", "tau", "tau", "tau"}] = f;
    d.f_symbols[{"tau", "tau", "tau", "e"}] = scalar(1.0);

    d.r_symbols[{"tau", "tau", "e"}] = phase(-4.0 * std::numbers::pi / 5.0);
    d.r_symbols[{"tau", "tau", "tau"}] = phase(3.0 * std::numbers::pi / 5.0);
    return d;
}

ModelData fermion_data()
{
    ModelData d;
    d.name = "fermion";
    d.labels = {"e", "psi"};
    d.vacuum = "e";
    d.dual = {{"e", "e"}, {"psi", "psi"}};
    d.fusion = {{"psi", "psi", "e"}};
    d.f_symbols[{"psi", "psi", "psi", "psi"}] = scalar(1.0);
    d.r_symbols[{"psi", "psi", "e"}] = -1.0;
    return d;
}

// Standard multiplicity-free Ising solution; certified by the pentagon and
// hexagon checks in validate_model.
ModelData ising_data()
{
    const double s = 1.0 / std::sqrt(2.0);

    ModelData d;
    d.name = "ising";
    d.labels = {"1", "psi", "sigma"};
    d.vacuum = "1";
    d.dual = {{"1", "1"}, {"psi", "psi"}, {"sigma", "sigma"}};
    d.fusion = {{"psi", "psi", "1"}, {"psi", "sigma", "sigma"}, {"sigma", "sigma", "1"}, {"sigma", "sigma", "psi"}};

    const std::vector<std::tuple<std::string, std::string, std::string, std::string, double>> ones = {
        {"psi", "psi", "psi", "psi", 1.0},    {"psi", "psi", "sigma", "sigma", 1.0}, {"sigma", "psi", "psi", "sigma", 1.0},
        {"psi", "sigma", "sigma", "1", 1.0},  {"psi", "sigma", "sigma", "psi", 1.0}, {"sigma", "sigma", "psi", "1", 1.0},
        {"sigma", "sigma", "psi", "psi", 1.0}, {"sigma", "psi", "sigma", "1", 1.0},  {"psi", "sigma", "psi", "sigma", -1.0},
        {"sigma", "psi", "sigma", "psi", -1.0},
    };
    for (const auto& [a, b, c, dd, v] : ones)
        d.f_symbols[{a, b, c, dd}] = scalar(v);
    Eigen::MatrixXcd h(2, 2);
    h << s, s, s, -s;
    d.f_symbols[{"sigma", "sigma", "sigma", "sigma"}] = h;

    const double pi = std::numbers::pi;
    d.r_symbols[{"psi", "psi", "1"}] = -1.0;
    d.r_symbols[{"sigma", "sigma", "1"}] = phase(-pi / 8.0);
    d.r_symbols[{"sigma", "sigma", "psi"}] = phase(3.0 * pi / 8.0);
    d.r_symbols[{"sigma", "psi", "sigma"}] = Complex(0.0, -1.0);
    d.r_symbols[{"psi", "sigma", "sigma"}] = Complex(0.0, -1.0);
    return d;
}

} // namespace

std::vector<std::string> builtin_names() { return {"fibonacci", "fermion", "ising"}; }

ModelData builtin_data(const std::string& name)
{
    if (name == "fibonacci")
        return fibonacci_data();
    if (name == "fermion")
        return fermion_data();
    if (name == "ising")
        return ising_data();
    throw ArgumentError("unknown builtin model '" + name + "'");
}

AnyonModel builtin(const std::string& name) { return AnyonModel(builtin_data(name)); }

} // namespace anyon
