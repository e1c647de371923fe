#pragma once

#include <string>
#include <utility>
#include <vector>

#include "obf/bytes.hpp"
#include "obf/rng.hpp"

namespace obf::actions {

// Bundled benign material the mutation actions draw from: a pool of benign
// bytes plus name lists. Shipped as data files under the repository's data/
// directory (see BenignAssets::load).
struct BenignAssets {
  Bytes byte_pool;
  std::vector<std::string> section_names;
  std::vector<std::pair<std::string, std::string>> imports;  // (dll, symbol)

  // Loads benign_bytes.bin, benign_section_names.txt and benign_imports.txt
  // from `dir`. Throws IoFailure when a file is missing or empty.
  static BenignAssets load(const std::string& dir);

  // Default data directory baked in at configure time.
  static const char* default_dir();

  // Contiguous slice of the pool starting at a random offset (wrapping),
  // which preserves the pool's local byte structure.
  Bytes draw_pool_bytes(std::size_t count, Rng& rng) const;
  const std::string& draw_section_name(Rng& rng) const;
  const std::pair<std::string, std::string>& draw_import(Rng& rng) const;
};

}  // namespace obf::actions
