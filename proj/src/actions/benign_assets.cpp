#include "obf/actions/benign_assets.hpp"

#include <fstream>

namespace obf::actions {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::IoFailure, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

BenignAssets BenignAssets::load(const std::string& dir) {
  BenignAssets assets;
  assets.byte_pool = read_file(dir + "/benign_bytes.bin");
  if (assets.byte_pool.empty()) raise(Errc::IoFailure, "empty benign byte pool");

  for (const auto& line : read_lines(dir + "/benign_section_names.txt")) {
    if (line.size() <= 8) assets.section_names.push_back(line);
  }
  if (assets.section_names.empty()) raise(Errc::IoFailure, "empty benign section name list");

  for (const auto& line : read_lines(dir + "/benign_imports.txt")) {
    const auto comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 >= line.size()) continue;
    assets.imports.emplace_back(line.substr(0, comma), line.substr(comma + 1));
  }
  if (assets.imports.empty()) raise(Errc::IoFailure, "empty benign import list");
  return assets;
}

const char* BenignAssets::default_dir() {
#ifdef OBF_DEFAULT_DATA_DIR
  return OBF_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

Bytes BenignAssets::draw_pool_bytes(std::size_t count, Rng& rng) const {
  Bytes out(count);
  const std::size_t start = rng.uniform_u64(byte_pool.size());
  for (std::size_t i = 0; i < count; ++i) out[i] = byte_pool[(start + i) % byte_pool.size()];
  return out;
}

const std::string& BenignAssets::draw_section_name(Rng& rng) const {
  return section_names[rng.uniform_u64(section_names.size())];
}

const std::pair<std::string, std::string>& BenignAssets::draw_import(Rng& rng) const {
  return imports[rng.uniform_u64(imports.size())];
}

}  // namespace obf::actions
