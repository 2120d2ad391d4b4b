#pragma once

#include "anyon/algebra.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace anyon {

/// A named observable with the modes it is local to. Stored on disk as a
/// triplet file whose header also carries `fixture=`, `sites=` and a
/// free-text provenance line.
struct Fixture {
    std::string name;
    std::vector<int> sites;
    std::string provenance;
    SparseOperator op;
};

/// Observable corpus on modes {1,2} of a 3-mode Fibonacci system: one
/// Hermitian operator |P><P'| + h.c. per unordered pair of prefix trees
/// with equal charge. Named obs-<charge>-<i>.
std::vector<Fixture> fibonacci_corpus(const LadderSet& set);

std::string fixture_to_text(const Fixture& f);
Fixture read_fixture(const std::filesystem::path& path, const BasisPtr& basis);

/// Names of *.fixture files in `dir`, sorted.
std::vector<std::string> list_fixtures(const std::filesystem::path& dir);

std::vector<int> parse_sites(const std::string& text);

} // namespace anyon
