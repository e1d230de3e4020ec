#pragma once

#include <filesystem>

#include "latlab/taxonomy/carve.hpp"
#include "latlab/taxonomy/types.hpp"

namespace latlab::tax {

void save_structure(const SemanticStructure& s, const std::filesystem::path& path);
SemanticStructure load_structure(const std::filesystem::path& path);

void save_carve(const CarveResult& c, const std::filesystem::path& path);
CarveResult load_carve(const std::filesystem::path& path);

}  // namespace latlab::tax
