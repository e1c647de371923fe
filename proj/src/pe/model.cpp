#include "obf/pe/model.hpp"

namespace obf::pe {

std::string SectionEntry::name_str() const {
  std::string s;
  for (std::uint8_t c : name) {
    if (c == 0) break;
    s.push_back(static_cast<char>(c));
  }
  return s;
}

const SectionEntry* PeBinary::find_section(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name_str() == name) return &s;
  return nullptr;
}

const SectionEntry* PeBinary::section_for_rva(std::uint32_t rva) const {
  for (const auto& s : sections) {
    const std::uint32_t extent = s.virtual_extent();
    if (extent == 0) continue;
    if (rva >= s.virtual_rva && rva - s.virtual_rva < extent) return &s;
  }
  return nullptr;
}

std::size_t PeBinary::rva_to_offset(std::uint32_t rva) const {
  if (rva < optional_header.size_of_headers) {
    if (rva >= raw.size()) raise(Errc::OutOfBounds, "header rva " + std::to_string(rva));
    return rva;
  }
  const SectionEntry* s = section_for_rva(rva);
  if (s == nullptr) raise(Errc::OutOfBounds, "unmapped rva " + std::to_string(rva));
  const std::uint32_t delta = rva - s->virtual_rva;
  if (delta >= s->raw_size) raise(Errc::OutOfBounds, "virtual-only rva " + std::to_string(rva));
  return static_cast<std::size_t>(s->raw_offset) + delta;
}

const char* violation_name(Violation v) {
  switch (v) {
    case Violation::BadDosMagic: return "BadDosMagic";
    case Violation::BadPeMagic: return "BadPeMagic";
    case Violation::TruncatedHeader: return "TruncatedHeader";
    case Violation::OutOfBoundsSection: return "OutOfBoundsSection";
    case Violation::SectionOverlapsHeaders: return "SectionOverlapsHeaders";
    case Violation::SectionOverlapsSection: return "SectionOverlapsSection";
    case Violation::SectionCountMismatch: return "SectionCountMismatch";
    case Violation::OutOfBoundsDirectory: return "OutOfBoundsDirectory";
    case Violation::DanglingEntryPoint: return "DanglingEntryPoint";
    case Violation::MalformedImportThunk: return "MalformedImportThunk";
  }
  return "Unknown";
}

}  // namespace obf::pe
