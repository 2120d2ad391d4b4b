#pragma once

#include "anyon/types.hpp"

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace anyon {

/// F-move [F^{abc}_d]: rows are channels e in a x b, columns channels f in
/// b x c, both listed in model label order.
///
///   |((a b)_e c)_d>  =  sum_f [F^{abc}_d]_{e f} |(a (b c)_f)_d>
struct FMatrix {
    std::vector<Charge> rows;
    std::vector<Charge> cols;
    Eigen::MatrixXcd values;

    /// Entry for channels (e, f); zero when either channel is not admissible.
    Complex at(Charge e, Charge f) const;
};

/// Raw theory description prior to ordering and validation. Labels may be
/// in any order; AnyonModel sorts them.
struct ModelData {
    std::string name;
    std::vector<std::string> labels;
    std::string vacuum;
    std::map<std::string, std::string> dual;
    std::vector<std::tuple<std::string, std::string, std::string>> fusion;
    // Keyed by (a, b, c, d); values in the row/col convention of FMatrix.
    std::map<std::tuple<std::string, std::string, std::string, std::string>, Eigen::MatrixXcd> f_symbols;
    std::map<std::tuple<std::string, std::string, std::string>, Complex> r_symbols;
};

/// A multiplicity-free anyon theory: fusion rules with F- and R-symbols.
///
/// Labels are reordered at construction so that every abelian type precedes
/// every non-abelian type; the vacuum is always index 0 and ties are broken
/// by document order. The object is immutable after construction.
class AnyonModel {
public:
    /// Builds and checks a model. Throws ModelError for malformed data,
    /// fusion multiplicities above one, missing F/R entries for admissible
    /// fusions, or non-unitary F-matrices beyond `tolerance`.
    explicit AnyonModel(const ModelData& data, double tolerance = kDefaultTolerance);

    const std::string& name() const { return name_; }
    int num_types() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(Charge a) const { return labels_.at(a); }
    Charge index_of(const std::string& label) const;
    bool has_label(const std::string& label) const;
    Charge vacuum() const { return 0; }
    Charge dual(Charge a) const { return dual_.at(a); }

    bool fuses(Charge a, Charge b, Charge c) const { return fusion_[idx3(a, b, c)] != 0; }
    /// Channels of a x b in label order.
    const std::vector<Charge>& fuse(Charge a, Charge b) const { return channels_[a * num_types() + b]; }
    bool is_abelian(Charge a) const { return abelian_.at(a); }

    /// F-matrix for (a,b,c;d), or nullptr when no admissible channel exists.
    const FMatrix* f_matrix(Charge a, Charge b, Charge c, Charge d) const;
    /// Single F entry [F^{abc}_d]_{e f}; zero when inadmissible.
    Complex f_symbol(Charge a, Charge b, Charge c, Charge d, Charge e, Charge f) const;
    /// R^{ab}_c; zero when c is not in a x b.
    Complex r_symbol(Charge a, Charge b, Charge c) const;

    double quantum_dim(Charge a) const { return qdims_.at(a); }

    /// Every (a, b, c, d) for which some admissible (e, f) channel exists.
    std::vector<std::tuple<Charge, Charge, Charge, Charge>> admissible_f_keys() const;

    /// Round-trips to the raw description, labels in model order.
    ModelData to_data() const;

private:
    int idx3(Charge a, Charge b, Charge c) const { return (a * num_types() + b) * num_types() + c; }

    std::string name_;
    std::vector<std::string> labels_;
    std::vector<Charge> dual_;
    std::vector<char> fusion_;
    std::vector<std::vector<Charge>> channels_;
    std::vector<bool> abelian_;
    std::map<std::tuple<Charge, Charge, Charge, Charge>, FMatrix> f_;
    std::map<std::tuple<Charge, Charge, Charge>, Complex> r_;
    std::vector<double> qdims_;
};

/// Builtin theories: "fibonacci", "fermion", "ising". Throws ArgumentError
/// for any other name.
AnyonModel builtin(const std::string& name);
ModelData builtin_data(const std::string& name);
std::vector<std::string> builtin_names();

/// {c : N_ab^c = 1}, in label order.
std::vector<Charge> fuse(const AnyonModel& model, Charge a, Charge b);

enum class ValidationLevel { basic, full };

struct ValidationCheck {
    std::string name;
    bool passed = true;
    double max_residual = 0.0;
};

struct ValidationReport {
    ValidationLevel level = ValidationLevel::basic;
    std::vector<ValidationCheck> checks;

    bool passed() const;
    const ValidationCheck* find(const std::string& name) const;
};

/// `basic` checks the structural invariants; `full` adds pentagon and both
/// hexagon equations by brute-force contraction over all label tuples.
ValidationReport validate_model(const AnyonModel& model, ValidationLevel level,
                                double tolerance = kDefaultTolerance);

/// Parse the JSON model document. Throws ModelError.
AnyonModel load_model(const std::string& json_text, double tolerance = kDefaultTolerance);
ModelData parse_model_data(const std::string& json_text);
std::string model_to_json(const AnyonModel& model);
std::string model_data_to_json(const ModelData& data);

} // namespace anyon
