#include "anyon/model.hpp"

#include <json.hpp>

#include <cmath>

namespace anyon {

using nlohmann::json;

namespace {

Complex parse_complex(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ModelError("expected [re, im] pair, got " + j.dump());
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// Accepts nested rows or a flat row-major list of [re, im] pairs.
Eigen::MatrixXcd parse_matrix(const json& j)
{
    if (!j.is_array() || j.empty())
        throw ModelError("F-symbol must be a non-empty array");
    bool nested = j[0].is_array() && !j[0].empty() && j[0][0].is_array();
    if (nested) {
        const auto rows = static_cast<Eigen::Index>(j.size());
        const auto cols = static_cast<Eigen::Index>(j[0].size());
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
                throw ModelError("ragged F-symbol matrix");
            for (Eigen::Index c = 0; c < cols; ++c)
                m(r, c) = parse_complex(j[r][c]);
        }
        return m;
    }
    const auto count = static_cast<Eigen::Index>(j.size());
    const auto dim = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(count))));
    if (dim * dim != count)
        throw ModelError("flat F-symbol length is not a square");
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index i = 0; i < count; ++i)
        m(i / dim, i % dim) = parse_complex(j[i]);
    return m;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

ModelData parse_model_data(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ModelError(std::string("malformed model document: ") + e.what());
    }
    if (!doc.is_object())
        throw ModelError("model document must be a JSON object");

    try {
        ModelData d;
        d.name = doc.value("name", std::string("custom"));
        if (!doc.contains("labels") || !doc.contains("vacuum"))
            throw ModelError("model document requires 'labels' and 'vacuum'");
        d.labels = doc.at("labels").get<std::vector<std::string>>();
        d.vacuum = doc.at("vacuum").get<std::string>();
        if (doc.contains("dual"))
            d.dual = doc.at("dual").get<std::map<std::string, std::string>>();
        for (const auto& t : doc.value("fusion", json::array())) {
            if (!t.is_array() || t.size() < 3 || t.size() > 4)
                throw ModelError("fusion entries must be [a, b, c] or [a, b, c, multiplicity]");
            int mult = t.size() == 4 ? t[3].get<int>() : 1;
            if (mult > 1)
                throw ModelError("multiplicity unsupported: " + t.dump());
            if (mult < 1)
                continue;
            d.fusion.emplace_back(t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>());
        }
        const json fsyms = doc.value("f_symbols", json::object());
        for (const auto& [key, val] : fsyms.items()) {
            auto halves = split(key, ';');
            if (halves.size() != 2)
                throw ModelError("bad F-symbol key '" + key + "'");
            auto abc = split(halves[0], ',');
            if (abc.size() != 3)
                throw ModelError("bad F-symbol key '" + key + "'");
            d.f_symbols[{abc[0], abc[1], abc[2], halves[1]}] = parse_matrix(val);
        }
        const json rsyms = doc.value("r_symbols", json::object());
        for (const auto& [key, val] : rsyms.items()) {
            auto halves = split(key, ';');
            if (halves.size() != 2)
                throw ModelError("bad R-symbol key '" + key + "'");
            auto ab = split(halves[0], ',');
            if (ab.size() != 2)
                throw ModelError("bad R-symbol key '" + key + "'");
            d.r_symbols[{ab[0], ab[1], halves[1]}] = parse_complex(val);
        }
        return d;
    } catch (const json::exception& e) {
        throw ModelError(std::string("malformed model document: ") + e.what());
    }
}

AnyonModel load_model(const std::string& json_text, double tolerance)
{
    return AnyonModel(parse_model_data(json_text), tolerance);
}

std::string model_data_to_json(const ModelData& d)
{
    json doc;
    doc["name"] = d.name;
    doc["labels"] = d.labels;
    doc["vacuum"] = d.vacuum;
    doc["dual"] = d.dual;
    json fusion = json::array();
    for (const auto& [a, b, c] : d.fusion)
        fusion.push_back({a, b, c});
    doc["fusion"] = fusion;
    json fs = json::object();
    for (const auto& [k, m] : d.f_symbols) {
        auto [a, b, c, dd] = k;
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index col = 0; col < m.cols(); ++col)
                row.push_back(complex_json(m(r, col)));
            rows.push_back(row);
        }
        fs[a + "," + b + "," + c + ";" + dd] = rows;
    }
    doc["f_symbols"] = fs;
    json rs = json::object();
    for (const auto& [k, z] : d.r_symbols) {
        auto [a, b, c] = k;
        rs[a + "," + b + ";" + c] = complex_json(z);
    }
    doc["r_symbols"] = rs;
    return doc.dump(2);
}

std::string model_to_json(const AnyonModel& model) { return model_data_to_json(model.to_data()); }

} // namespace anyon
