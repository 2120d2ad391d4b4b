#include "anyon/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace anyon {

std::vector<Fixture> fibonacci_corpus(const LadderSet& set)
{
    const Charge tau = fibonacci_tau(set.model());
    if (set.n_modes() != 3)
        throw ArgumentError("the observable corpus lives on 3 modes");
    const std::vector<int> sites{1, 2};
    const auto basis = local_observable_basis(set, sites);
    std::vector<Fixture> out;
    for (Charge c : {set.model().vacuum(), tau}) {
        std::vector<PrefixTree> trees;
        for (const auto& el : basis)
            if (el.ket.charge == c && std::find(trees.begin(), trees.end(), el.ket) == trees.end())
                trees.push_back(el.ket);
        int count = 0;
        for (size_t p = 0; p < trees.size(); ++p)
            for (size_t q = p; q < trees.size(); ++q) {
                auto it = std::find_if(basis.begin(), basis.end(),
                                       [&](const auto& el) { return el.ket == trees[p] && el.bra == trees[q]; });
                SparseOperator op = p == q ? it->op : it->op + it->op.adjoint();
                auto leaves = [&](const PrefixTree& t) {
                    return set.model().label(t.leaves[0]) + "," + set.model().label(t.leaves[1]);
                };
                std::ostringstream prov;
                prov << "|" << leaves(trees[p]) << ";" << set.model().label(c) << "><" << leaves(trees[q]) << ";"
                     << set.model().label(c) << "|" << (p == q ? "" : " + h.c.")
                     << " on modes 1,2, identity on mode 3";
                out.push_back({"obs-" + set.model().label(c) + "-" + std::to_string(++count), sites, prov.str(), op});
            }
    }
    return out;
}

std::string fixture_to_text(const Fixture& f)
{
    std::ostringstream os;
    os << "# fixture=" << f.name << " sites=";
    for (size_t i = 0; i < f.sites.size(); ++i)
        os << (i ? "," : "") << f.sites[i];
    os << "\n# provenance: " << f.provenance << "\n";
    os << to_triplets(f.op);
    return os.str();
}

std::vector<int> parse_sites(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            int v = std::stoi(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ArgumentError("bad site list '" + text + "'");
        }
    }
    if (out.empty())
        throw ArgumentError("empty site list");
    return out;
}

Fixture read_fixture(const std::filesystem::path& path, const BasisPtr& basis)
{
    std::ifstream in(path);
    if (!in)
        throw ArgumentError("cannot read fixture " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    auto data = parse_triplets(text);
    std::string name = data.header.count("fixture") ? data.header["fixture"] : path.stem().string();
    if (!data.header.count("sites"))
        throw ArgumentError("fixture " + path.string() + " has no sites= header");
    std::string provenance;
    auto pos = text.find("# provenance: ");
    if (pos != std::string::npos)
        provenance = text.substr(pos + 14, text.find('\n', pos) - pos - 14);
    return {name, parse_sites(data.header["sites"]), provenance, from_triplets(data, basis)};
}

std::vector<std::string> list_fixtures(const std::filesystem::path& dir)
{
    std::vector<std::string> out;
    if (!std::filesystem::is_directory(dir))
        return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".fixture")
            out.push_back(e.path().stem().string());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace anyon
