// anyonctl: command-line front end for the anyonops library.
//
// Exit codes: 0 success, 1 an asserted check failed, 2 usage or input error.

#include "anyon/corpus.hpp"
#include "anyon/hubbard.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#ifndef ANYON_FIXTURE_DIR
#define ANYON_FIXTURE_DIR "fixtures"
#endif

namespace fs = std::filesystem;
using namespace anyon;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw ArgumentError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out)
        throw ArgumentError("cannot write " + p.string());
    out << text;
}

// A builtin name or a path to a model document.
ModelPtr resolve_model(const std::string& spec, double tol)
{
    if (fs::exists(spec))
        return share(load_model(read_file(spec), tol));
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), spec) != names.end())
        return share(builtin(spec));
    std::string list;
    for (const auto& n : names)
        list += (list.empty() ? "" : ", ") + n;
    throw ArgumentError("model '" + spec + "' is neither a file nor a builtin (" + list + ")");
}

Charge parse_charge(const AnyonModel& m, const std::string& label)
{
    for (Charge c = 0; c < m.num_types(); ++c)
        if (m.label(c) == label)
            return c;
    throw ArgumentError("unknown charge label '" + label + "'");
}

bool is_abelian(const AnyonModel& m)
{
    for (Charge a = 0; a < m.num_types(); ++a)
        for (Charge b = 0; b < m.num_types(); ++b)
            if (fuse(m, a, b).size() != 1)
                return false;
    return true;
}

// Collects asserted and report-only checks for one command.
struct Checklist {
    double tol;
    json items = json::array();
    bool ok = true;

    void add(const std::string& suite, const std::string& name, double residual, bool passed, bool asserted,
             const std::string& detail = "")
    {
        if (asserted && !passed)
            ok = false;
        items.push_back({{"suite", suite},
                         {"name", name},
                         {"residual", residual},
                         {"asserted", asserted},
                         {"passed", passed},
                         {"detail", detail}});
        std::cout << (asserted ? (passed ? "  ok      " : "  FAILED  ") : "  report  ") << suite << ": " << name
                  << "  residual=" << fmt(residual);
        if (!detail.empty())
            std::cout << "  (" << detail << ")";
        std::cout << "\n";
    }
};

// ------------------------------------------------------------------ validate

int cmd_validate(const std::string& model_spec, const std::string& level, double tol, const std::string& report)
{
    ValidationLevel lv;
    if (level == "basic")
        lv = ValidationLevel::basic;
    else if (level == "full")
        lv = ValidationLevel::full;
    else
        throw ArgumentError("--level must be basic or full");
    auto data = fs::exists(model_spec) ? parse_model_data(read_file(model_spec)) : builtin_data(model_spec);
    // Structural problems surface as ModelError from the constructor; use a
    // loose load tolerance so the validator reports equation residuals.
    AnyonModel model(data, 1e300);
    auto rep = validate_model(model, lv, tol);
    std::cout << "model " << model.name() << " (" << level << ")\n";
    json doc{{"model", model.name()}, {"level", level}, {"tolerance", tol}, {"checks", json::array()}};
    for (const auto& c : rep.checks) {
        std::cout << (c.passed ? "  ok      " : "  FAILED  ") << c.name << "  residual=" << fmt(c.max_residual) << "\n";
        doc["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"max_residual", c.max_residual}});
    }
    doc["passed"] = rep.passed();
    if (!report.empty())
        write_file(report, doc.dump(2) + "\n");
    std::cout << (rep.passed() ? "PASS" : "FAIL") << "\n";
    return rep.passed() ? kOk : kFailed;
}

// -------------------------------------------------------------------- ladder

int cmd_ladder(const std::string& model_spec, int modes, const std::string& out, double tol)
{
    auto model = resolve_model(model_spec, tol);
    LadderSet set(model, modes);
    std::cout << "model " << model->name() << ", " << modes << " mode(s), basis dimension " << set.basis()->dim()
              << "\n";
    std::vector<CoefficientTable> all;
    int total = 0;
    for (Charge a : set.particles()) {
        const auto& tables = set.tables(a);
        all.insert(all.end(), tables.begin(), tables.end());
        std::cout << "  " << model->label(a) << ": J=" << tables.size() << ", " << tables.size() * modes
                  << " annihilation operators\n";
        for (int k = 1; k <= modes; ++k)
            for (int j = 0; j < static_cast<int>(tables.size()); ++j) {
                ++total;
                if (!out.empty())
                    write_file(fs::path(out) / (model->label(a) + "_k" + std::to_string(k) + "_j" +
                                                std::to_string(j) + ".triplets"),
                               to_triplets(set.annihilator(a, k, j)));
            }
    }
    if (!out.empty()) {
        write_file(fs::path(out) / "coefficients.json", coefficient_tables_to_json(*model, all) + "\n");
        std::cout << "wrote " << total << " operators and coefficients.json to " << out << "\n";
    }
    return kOk;
}

// -------------------------------------------------------------------- verify

void suite_relations(const LadderSet& set, Checklist& cl)
{
    bool fib = true;
    try {
        fibonacci_tau(set.model());
    } catch (const ArgumentError&) {
        fib = false;
    }
    RelationReport rep;
    if (fib)
        rep = verify_relations(set, cl.tol);
    else if (is_abelian(set.model()))
        rep = verify_car(set, cl.tol);
    else {
        cl.add("relations", "no relation family for this model", 0.0, true, false);
        return;
    }
    for (const auto& e : rep.entries)
        cl.add("relations", e.name, e.residual, e.passed, e.asserted, e.detail);
}

void suite_locality(const LadderSet& set, Checklist& cl)
{
    const int n = set.n_modes();
    std::vector<std::vector<int>> sets;
    for (int m = 1; m < n; ++m) {
        std::vector<int> s;
        for (int k = 1; k <= m; ++k)
            s.push_back(k);
        sets.push_back(s);
    }
    if (n >= 3)
        sets.push_back({1, 3});
    if (sets.empty()) {
        cl.add("locality", "single mode: every observable is local", 0.0, true, false);
        return;
    }
    for (const auto& s : sets) {
        std::string name;
        for (int k : s)
            name += (name.empty() ? "{" : ",") + std::to_string(k);
        name += "}";
        double worst = 0;
        for (const auto& el : local_observable_basis(set, s))
            worst = std::max(worst, is_local_candidate(set, el.op, s, cl.tol).residual);
        cl.add("locality", "observable basis on " + name + " is local", worst, worst <= cl.tol, true);
        // Exchanging the last site of the set with an outside neighbour is not local.
        const int k = s.back() < n ? s.back() : s.back() - 1;
        auto chk = is_local_candidate(set, set.braid(k), s, cl.tol);
        cl.add("locality", "braid(" + std::to_string(k) + "," + std::to_string(k + 1) + ") rejected on " + name,
               chk.residual, !chk.local, true);
    }
}

void suite_fock(const LadderSet& set, Checklist& cl)
{
    const auto& b = *set.basis();
    const int vac = vacuum_index(b);
    int reproduced = 0;
    double worst = 0;
    for (int i = 0; i < b.dim(); ++i) {
        auto w = fock_word(set, i);
        worst = std::max(worst, w.residual);
        if (w.residual <= cl.tol)
            ++reproduced;
    }
    cl.add("fock", "canonical states reproduced " + std::to_string(reproduced) + "/" + std::to_string(b.dim()), worst,
           reproduced == b.dim(), true);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(b.dim());
    v(vac) = 1.0;
    double kill = 0;
    for (Charge a : set.particles())
        for (int k = 1; k <= set.n_modes(); ++k)
            for (int j = 0; j < set.count(a); ++j)
                kill = std::max(kill, set.annihilator(a, k, j).apply(v).norm());
    cl.add("fock", "annihilators kill the vacuum", kill, kill <= cl.tol, true);
    const int kd = kernel_intersection_dimension(set);
    cl.add("fock", "common kernel dimension " + std::to_string(kd), std::abs(kd - 1.0), kd == 1, true);
}

void suite_closure(const LadderSet& set, Checklist& cl)
{
    if (set.n_modes() > 4) {
        cl.add("closure", "skipped above 4 modes", 0.0, true, false);
        return;
    }
    const auto& b = *set.basis();
    std::vector<SparseOperator> gens, single;
    for (Charge a : set.particles())
        for (int k = 1; k <= set.n_modes(); ++k)
            for (int j = 0; j < set.count(a); ++j) {
                gens.push_back(set.annihilator(a, k, j));
                gens.push_back(set.creator(a, k, j));
                if (k == 1) {
                    single.push_back(set.annihilator(a, k, j));
                    single.push_back(set.creator(a, k, j));
                }
            }
    auto cr = algebra_closure(gens);
    long block = 0;
    double worst = 0;
    for (int i = 0; i < b.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j)
            if (b.state(i).total == b.state(j).total) {
                ++block;
                SparseOperator::Matrix m(b.dim(), b.dim());
                m.insert(i, j) = 1.0;
                worst = std::max(worst, span_residual(cr, SparseOperator(set.basis(), m)));
            }
    cl.add("closure",
           "all generators: dimension " + std::to_string(cr.dimension) + " contains the charge-block algebra (" +
               std::to_string(block) + ")",
           worst, worst <= 1e-8 && !cr.capped, true);
    auto sc = algebra_closure(single);
    const int cand = span_dimension([&] {
        std::vector<SparseOperator> ops;
        for (const auto& el : candidate_local_basis(set, {1}))
            ops.push_back(el.op);
        return ops;
    }());
    cl.add("closure",
           "mode-1 generators: dimension " + std::to_string(sc.dimension) + ", candidate algebra " +
               std::to_string(cand),
           std::abs(sc.dimension - cand), sc.dimension == cand, true);
}

int cmd_verify(const std::string& model_spec, int modes, const std::string& suite, double tol,
               const std::string& report)
{
    static const std::set<std::string> suites{"relations", "locality", "fock", "closure", "all"};
    if (!suites.count(suite))
        throw ArgumentError("--suite must be one of relations, locality, fock, closure, all");
    auto model = resolve_model(model_spec, tol);
    LadderSet set(model, modes);
    std::cout << "model " << model->name() << ", " << modes << " mode(s), tolerance " << fmt(tol) << "\n";
    Checklist cl{tol};
    if (suite == "relations" || suite == "all")
        suite_relations(set, cl);
    if (suite == "locality" || suite == "all")
        suite_locality(set, cl);
    if (suite == "fock" || suite == "all")
        suite_fock(set, cl);
    if (suite == "closure" || suite == "all")
        suite_closure(set, cl);
    if (!report.empty())
        write_file(report, json{{"model", model->name()}, {"modes", modes}, {"tolerance", tol}, {"checks", cl.items},
                                {"passed", cl.ok}}
                               .dump(2) +
                               "\n");
    std::cout << (cl.ok ? "PASS" : "FAIL") << "\n";
    return cl.ok ? kOk : kFailed;
}

// ----------------------------------------------------------------- decompose

int cmd_decompose(const std::string& model_spec, int modes, const std::string& op_path, const std::string& fixture,
                  const std::string& fixture_dir, const std::string& sites_text, const std::string& out, double tol)
{
    if (op_path.empty() == fixture.empty())
        throw ArgumentError("give exactly one of --op or --fixture");
    auto model = resolve_model(model_spec, tol);
    LadderSet set(model, modes);
    std::vector<int> sites;
    std::optional<SparseOperator> op;
    if (!fixture.empty()) {
        const auto names = list_fixtures(fixture_dir);
        if (std::find(names.begin(), names.end(), fixture) == names.end()) {
            std::string list;
            for (const auto& n : names)
                list += (list.empty() ? "" : ", ") + n;
            throw ArgumentError("unknown fixture '" + fixture + "' in " + fixture_dir +
                                "; available: " + (list.empty() ? "(none)" : list));
        }
        auto f = read_fixture(fs::path(fixture_dir) / (fixture + ".fixture"), set.basis());
        std::cout << "fixture " << f.name << ": " << f.provenance << "\n";
        sites = f.sites;
        op = f.op;
    } else {
        op = from_triplets(parse_triplets(read_file(op_path)), set.basis());
    }
    if (!sites_text.empty())
        sites = parse_sites(sites_text);
    if (sites.empty())
        throw ArgumentError("--sites is required with --op");
    Decomposition d;
    try {
        d = decompose_observable(set, *op, sites, tol);
    } catch (const NotExpressibleError& e) {
        std::cout << "not expressible: " << e.what() << "\nFAIL\n";
        return kFailed;
    }
    std::cout << "polynomial: " << d.polynomial.to_string(*model) << "\n";
    std::cout << "terms: " << d.polynomial.size() << ", method: " << d.method << ", residual: " << fmt(d.residual)
              << "\n";
    if (!out.empty())
        write_file(out, json{{"model", model->name()},
                             {"modes", modes},
                             {"sites", sites},
                             {"method", d.method},
                             {"residual", d.residual},
                             {"polynomial", json::parse(d.polynomial.to_json(*model))}}
                                .dump(2) +
                            "\n");
    const bool ok = d.residual <= tol;
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kOk : kFailed;
}

// ------------------------------------------------------------------- hubbard

int cmd_hubbard(int rungs, double t, double mu, const std::string& indexing, const std::string& sector,
                const std::string& method, int lowest, const std::string& out, double tol)
{
    const auto idx = parse_indexing(indexing);
    auto spec = build_lattice(rungs, idx);
    DiagMethod dm;
    if (method == "auto")
        dm = DiagMethod::automatic;
    else if (method == "dense")
        dm = DiagMethod::dense;
    else if (method == "lanczos")
        dm = DiagMethod::iterative;
    else
        throw ArgumentError("--method must be auto, dense or lanczos");
    auto model = share(builtin("fibonacci"));
    LadderSet set(model, spec.n_modes());
    std::vector<Charge> sectors;
    if (sector == "all")
        sectors = {model->vacuum(), fibonacci_tau(*model)};
    else
        sectors = {parse_charge(*model, sector)};

    std::cout << "2 x " << rungs << " lattice, " << spec.n_modes() << " modes, indexing " << indexing << "\n";
    std::cout << "edges:";
    for (const auto& e : spec.edges)
        std::cout << " (" << e.i << "," << e.j << (e.kind == LatticeEdge::Kind::rung ? ",rung" : "") << ")";
    std::cout << "\n";
    if (rungs > 1)
        std::cout << "note: rung (i,2N-i) of the printed sum differs from vertical neighbours (i,2N+1-i) "
                     "under the snake ordering; this run uses "
                  << (idx == RungIndexing::paper ? "(i,2N-i)" : "(i,2N+1-i)") << "\n";
    auto h = build_hamiltonian(set, spec, {t, mu});
    std::vector<Spectrum> spectra;
    for (Charge g : sectors) {
        spectra.push_back(diagonalize(h, g, dm, lowest, std::max(tol, 1e-12)));
        const auto& s = spectra.back();
        std::cout << "sector " << model->label(g) << ": dimension " << s.dimension << ", method " << s.method;
        if (!s.eigenvalues.empty())
            std::cout << ", lowest " << s.eigenvalues.front();
        std::cout << "\n";
    }
    const Spectrum* best = nullptr;
    for (const auto& s : spectra)
        if (!s.eigenvalues.empty() && (!best || s.eigenvalues.front() < best->eigenvalues.front() - 1e-12))
            best = &s;
    if (!out.empty()) {
        write_file(fs::path(out) / "spectrum.csv", spectrum_csv(*model, spectra));
        write_file(fs::path(out) / "lattice.json", spec.to_json() + "\n");
        if (best) {
            bool rescaled = false;
            write_file(fs::path(out) / "occupation.csv",
                       occupation_csv(occupation_profile(set, *best->ground_state, &rescaled)));
        }
        std::cout << "wrote spectrum.csv, occupation.csv and lattice.json to " << out << "\n";
    }
    return kOk;
}

// -------------------------------------------------------------- odds and ends

int cmd_export(const std::string& model_spec, const std::string& out, double tol)
{
    auto model = resolve_model(model_spec, tol);
    const auto text = model_to_json(*model) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return kOk;
}

int cmd_make_fixtures(const std::string& out, double tol)
{
    LadderSet set(share(builtin("fibonacci")), 3);
    int n = 0;
    for (const auto& f : fibonacci_corpus(set)) {
        auto d = decompose_observable(set, f.op, f.sites, tol);
        if (d.residual > tol)
            throw ArgumentError("fixture " + f.name + " does not reconstruct");
        write_file(fs::path(out) / (f.name + ".fixture"), fixture_to_text(f));
        ++n;
    }
    std::cout << "wrote " << n << " fixtures to " << out << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"anyonctl: anyon models, ladder operators, observables and Hubbard spectra"};
    app.require_subcommand(1);
    app.fallthrough();
    double tol = kDefaultTolerance;
    app.add_option("--tolerance", tol, "Comparison tolerance")->capture_default_str()->check(CLI::PositiveNumber);

    std::string model = "fibonacci", level = "full", report, out, suite = "all", op, fixture, sites;
    std::string fixture_dir = ANYON_FIXTURE_DIR, indexing = "geometric", sector = "all", method = "auto";
    int modes = 3, rungs = 1, lowest = 8;
    double t = 1.0, mu = 0.0;

    auto* validate = app.add_subcommand("validate", "Check model invariants, pentagon and hexagons");
    validate->add_option("--model", model, "Builtin name or model file")->capture_default_str();
    validate->add_option("--level", level, "basic or full")->capture_default_str();
    validate->add_option("--report", report, "Write a JSON report");

    auto* ladder = app.add_subcommand("ladder", "Build every annihilation operator");
    ladder->add_option("--model", model)->capture_default_str();
    ladder->add_option("--modes", modes)->capture_default_str();
    ladder->add_option("--out", out, "Directory for triplet files and coefficients.json");

    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("--model", model)->capture_default_str();
    verify->add_option("--modes", modes)->capture_default_str();
    verify->add_option("--suite", suite, "relations, locality, fock, closure or all")->capture_default_str();
    verify->add_option("--report", report, "Write a JSON report");

    auto* decompose = app.add_subcommand("decompose", "Write a local observable as a ladder polynomial");
    decompose->add_option("--model", model)->capture_default_str();
    decompose->add_option("--modes", modes)->capture_default_str();
    decompose->add_option("--op", op, "Operator in triplet format");
    decompose->add_option("--fixture", fixture, "Named corpus fixture");
    decompose->add_option("--fixtures-dir", fixture_dir)->capture_default_str();
    decompose->add_option("--sites", sites, "Comma-separated 1-based modes");
    decompose->add_option("--out", out, "Write the polynomial as JSON");

    auto* hubbard = app.add_subcommand("hubbard", "Fibonacci Hubbard model on a 2 x N ladder");
    hubbard->add_option("--rungs", rungs)->capture_default_str();
    hubbard->add_option("--t", t)->capture_default_str();
    hubbard->add_option("--mu", mu)->capture_default_str();
    hubbard->add_option("--indexing", indexing, "paper or geometric")->capture_default_str();
    hubbard->add_option("--sector", sector, "Charge label or all")->capture_default_str();
    hubbard->add_option("--method", method, "auto, dense or lanczos")->capture_default_str();
    hubbard->add_option("--lowest", lowest, "Eigenvalues kept by the iterative solver")->capture_default_str();
    hubbard->add_option("--out", out, "Directory for CSV output");

    auto* exportm = app.add_subcommand("export-model", "Print or write a model document");
    exportm->add_option("--model", model)->capture_default_str();
    exportm->add_option("--out", out, "Output file");

    auto* mkfix = app.add_subcommand("make-fixtures", "Regenerate the observable corpus");
    mkfix->add_option("--out", out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*validate)
            return cmd_validate(model, level, tol, report);
        if (*ladder)
            return cmd_ladder(model, modes, out, tol);
        if (*verify)
            return cmd_verify(model, modes, suite, tol, report);
        if (*decompose)
            return cmd_decompose(model, modes, op, fixture, fixture_dir, sites, out, tol);
        if (*hubbard)
            return cmd_hubbard(rungs, t, mu, indexing, sector, method, lowest, out, tol);
        if (*exportm)
            return cmd_export(model, out, tol);
        if (*mkfix)
            return cmd_make_fixtures(out, tol);
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
