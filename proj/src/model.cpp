#include "anyon/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace anyon {

Complex FMatrix::at(Charge e, Charge f) const
{
    auto r = std::find(rows.begin(), rows.end(), e);
    auto c = std::find(cols.begin(), cols.end(), f);
    if (r == rows.end() || c == cols.end())
        return {0.0, 0.0};
    return values(r - rows.begin(), c - cols.begin());
}

namespace {

std::string key_string(const std::tuple<std::string, std::string, std::string, std::string>& k)
{
    return std::get<0>(k) + "," + std::get<1>(k) + "," + std::get<2>(k) + ";" + std::get<3>(k);
}

} // namespace

AnyonModel::AnyonModel(const ModelData& data, double tolerance) : name_(data.name)
{
    if (data.labels.empty())
        throw ModelError("model has no labels");
    {
        std::set<std::string> seen;
        for (const auto& l : data.labels)
            if (!seen.insert(l).second)
                throw ModelError("duplicate label '" + l + "'");
        if (!seen.count(data.vacuum))
            throw ModelError("vacuum '" + data.vacuum + "' is not a label");
    }

    const int n = static_cast<int>(data.labels.size());
    auto doc_index = [&](const std::string& l) -> int {
        auto it = std::find(data.labels.begin(), data.labels.end(), l);
        if (it == data.labels.end())
            throw ModelError("unknown label '" + l + "'");
        return static_cast<int>(it - data.labels.begin());
    };

    // Fusion tensor in document order. Exact duplicate triples count as
    // multiplicity; the mirrored triple (b,a,c) is the same rule.
    std::vector<int> doc_fusion(n * n * n, 0);
    auto didx = [n](int a, int b, int c) { return (a * n + b) * n + c; };
    {
        std::map<std::tuple<int, int, int>, int> count;
        for (const auto& [as, bs, cs] : data.fusion) {
            int a = doc_index(as), b = doc_index(bs), c = doc_index(cs);
            ++count[{a, b, c}];
        }
        for (const auto& [k, m] : count) {
            auto [a, b, c] = k;
            if (m > 1)
                throw ModelError("multiplicity unsupported: " + data.labels[a] + " x " + data.labels[b] + " -> " +
                                 data.labels[c] + " listed " + std::to_string(m) + " times");
            doc_fusion[didx(a, b, c)] = 1;
            doc_fusion[didx(b, a, c)] = 1;
        }
        const int v = doc_index(data.vacuum);
        for (int a = 0; a < n; ++a) {
            doc_fusion[didx(v, a, a)] = 1;
            doc_fusion[didx(a, v, a)] = 1;
        }
    }

    std::vector<bool> doc_abelian(n);
    for (int a = 0; a < n; ++a) {
        int total = 0;
        bool single = true;
        for (int b = 0; b < n; ++b) {
            int row = 0;
            for (int c = 0; c < n; ++c)
                row += doc_fusion[didx(a, b, c)];
            total += row;
            if (row != 1)
                single = false;
        }
        if (total == 0)
            throw ModelError("label '" + data.labels[a] + "' has no fusion rules");
        doc_abelian[a] = single;
    }

    // Vacuum first, then the remaining abelian types, then non-abelian ones.
    std::vector<int> order;
    const int v = doc_index(data.vacuum);
    order.push_back(v);
    for (int a = 0; a < n; ++a)
        if (a != v && doc_abelian[a])
            order.push_back(a);
    for (int a = 0; a < n; ++a)
        if (!doc_abelian[a])
            order.push_back(a);
    std::vector<int> to_model(n);
    for (int i = 0; i < n; ++i)
        to_model[order[i]] = i;

    labels_.resize(n);
    abelian_.resize(n);
    for (int i = 0; i < n; ++i) {
        labels_[i] = data.labels[order[i]];
        abelian_[i] = doc_abelian[order[i]];
    }

    fusion_.assign(n * n * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                fusion_[idx3(to_model[a], to_model[b], to_model[c])] = static_cast<char>(doc_fusion[didx(a, b, c)]);
    channels_.assign(n * n, {});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (fusion_[idx3(a, b, c)])
                    channels_[a * n + b].push_back(c);

    dual_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        auto it = data.dual.find(labels_[a]);
        if (it != data.dual.end()) {
            dual_[a] = to_model[doc_index(it->second)];
        } else {
            for (int b = 0; b < n; ++b)
                if (fuses(a, b, 0)) {
                    dual_[a] = b;
                    break;
                }
        }
        if (dual_[a] < 0)
            throw ModelError("no dual for '" + labels_[a] + "'");
    }

    // F-symbols. Entries with a vacuum leg default to 1; every other
    // admissible quadruple must be supplied.
    std::map<std::tuple<Charge, Charge, Charge, Charge>, Eigen::MatrixXcd> given;
    for (const auto& [k, m] : data.f_symbols) {
        auto [as, bs, cs, ds] = k;
        given[{to_model[doc_index(as)], to_model[doc_index(bs)], to_model[doc_index(cs)], to_model[doc_index(ds)]}] = m;
    }
    for (Charge a = 0; a < n; ++a)
        for (Charge b = 0; b < n; ++b)
            for (Charge c = 0; c < n; ++c)
                for (Charge d = 0; d < n; ++d) {
                    FMatrix fm;
                    for (Charge e : fuse(a, b))
                        if (fuses(e, c, d))
                            fm.rows.push_back(e);
                    for (Charge f : fuse(b, c))
                        if (fuses(a, f, d))
                            fm.cols.push_back(f);
                    auto key = std::make_tuple(a, b, c, d);
                    auto it = given.find(key);
                    if (fm.rows.empty() || fm.cols.empty()) {
                        if (it != given.end())
                            throw ModelError("F-symbol given for inadmissible " +
                                             key_string({labels_[a], labels_[b], labels_[c], labels_[d]}));
                        continue;
                    }
                    if (fm.rows.size() != fm.cols.size())
                        throw ModelError("F-symbol " + key_string({labels_[a], labels_[b], labels_[c], labels_[d]}) +
                                         " is not square; fusion rules are inconsistent");
                    const auto dim = static_cast<Eigen::Index>(fm.rows.size());
                    if (it != given.end()) {
                        if (it->second.rows() != dim || it->second.cols() != dim)
                            throw ModelError("F-symbol " + key_string({labels_[a], labels_[b], labels_[c], labels_[d]}) +
                                             " has wrong shape");
                        fm.values = it->second;
                        given.erase(it);
                    } else if (a == 0 || b == 0 || c == 0) {
                        fm.values = Eigen::MatrixXcd::Identity(dim, dim);
                    } else {
                        throw ModelError("missing F-symbol " +
                                         key_string({labels_[a], labels_[b], labels_[c], labels_[d]}));
                    }
                    const double dev =
                        (fm.values.adjoint() * fm.values - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
                    if (dev > tolerance)
                        throw ModelError("non-unitary F-symbol " +
                                         key_string({labels_[a], labels_[b], labels_[c], labels_[d]}));
                    f_.emplace(key, std::move(fm));
                }

    for (const auto& [k, m] : data.r_symbols) {
        auto [as, bs, cs] = k;
        Charge a = to_model[doc_index(as)], b = to_model[doc_index(bs)], c = to_model[doc_index(cs)];
        if (!fuses(a, b, c))
            throw ModelError("R-symbol given for inadmissible " + as + "," + bs + ";" + cs);
        r_[{a, b, c}] = m;
    }
    for (Charge a = 0; a < n; ++a)
        for (Charge b = 0; b < n; ++b)
            for (Charge c : fuse(a, b))
                if (!r_.count({a, b, c})) {
                    if (a == 0 || b == 0)
                        r_[{a, b, c}] = 1.0;
                    else
                        throw ModelError("missing R-symbol " + labels_[a] + "," + labels_[b] + ";" + labels_[c]);
                }

    qdims_.assign(n, 1.0);
    for (Charge a = 0; a < n; ++a) {
        Eigen::MatrixXd na(n, n);
        for (Charge b = 0; b < n; ++b)
            for (Charge c = 0; c < n; ++c)
                na(b, c) = fuses(a, b, c) ? 1.0 : 0.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(na, false);
        double best = 0.0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
            best = std::max(best, es.eigenvalues()(i).real());
        qdims_[a] = best;
    }
}

Charge AnyonModel::index_of(const std::string& label) const
{
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end())
        throw ArgumentError("unknown particle label '" + label + "'");
    return static_cast<Charge>(it - labels_.begin());
}

bool AnyonModel::has_label(const std::string& label) const
{
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

const FMatrix* AnyonModel::f_matrix(Charge a, Charge b, Charge c, Charge d) const
{
    auto it = f_.find({a, b, c, d});
    return it == f_.end() ? nullptr : &it->second;
}

Complex AnyonModel::f_symbol(Charge a, Charge b, Charge c, Charge d, Charge e, Charge f) const
{
    const FMatrix* fm = f_matrix(a, b, c, d);
    return fm ? fm->at(e, f) : Complex{0.0, 0.0};
}

Complex AnyonModel::r_symbol(Charge a, Charge b, Charge c) const
{
    auto it = r_.find({a, b, c});
    return it == r_.end() ? Complex{0.0, 0.0} : it->second;
}

std::vector<std::tuple<Charge, Charge, Charge, Charge>> AnyonModel::admissible_f_keys() const
{
    std::vector<std::tuple<Charge, Charge, Charge, Charge>> keys;
    for (const auto& [k, v] : f_)
        keys.push_back(k);
    return keys;
}

ModelData AnyonModel::to_data() const
{
    ModelData d;
    d.name = name_;
    d.labels = labels_;
    d.vacuum = labels_[0];
    for (Charge a = 0; a < num_types(); ++a)
        d.dual[labels_[a]] = labels_[dual_[a]];
    for (Charge a = 0; a < num_types(); ++a)
        for (Charge b = a; b < num_types(); ++b)
            for (Charge c : fuse(a, b))
                if (a != 0)
                    d.fusion.emplace_back(labels_[a], labels_[b], labels_[c]);
    for (const auto& [k, fm] : f_) {
        auto [a, b, c, dd] = k;
        if (a == 0 || b == 0 || c == 0)
            continue;
        d.f_symbols[{labels_[a], labels_[b], labels_[c], labels_[dd]}] = fm.values;
    }
    for (const auto& [k, r] : r_) {
        auto [a, b, c] = k;
        if (a == 0 || b == 0)
            continue;
        d.r_symbols[{labels_[a], labels_[b], labels_[c]}] = r;
    }
    return d;
}

std::vector<Charge> fuse(const AnyonModel& model, Charge a, Charge b)
{
    if (a < 0 || b < 0 || a >= model.num_types() || b >= model.num_types())
        throw ArgumentError("particle index out of range");
    return model.fuse(a, b);
}

} // namespace anyon
