#include <algorithm>
#include <limits>

#include "obf/pe/model.hpp"

namespace obf::pe {

namespace {

constexpr std::uint16_t kDosMagic = 0x5A4D;        // "MZ"
constexpr std::uint32_t kPeSignature = 0x00004550;  // "PE\0\0"
constexpr std::uint16_t kOptMagicPe32 = 0x10B;
constexpr std::uint16_t kOptMagicPe32Plus = 0x20B;
constexpr std::size_t kMaxImportDescriptors = 4096;
constexpr std::size_t kMaxThunksPerDescriptor = 65536;
constexpr std::size_t kMaxNameLength = 512;

// RVA-to-file-offset resolution shared by the parser and the validator.
struct RvaMapper {
  const std::vector<SectionEntry>* sections;
  std::uint32_t size_of_headers;
  std::size_t file_len;

  // Maps an RVA span to a file offset; nullopt when not file-backed.
  std::optional<std::size_t> map(std::uint32_t rva, std::size_t span) const {
    if (rva < size_of_headers) {
      if (static_cast<std::size_t>(rva) + span > std::min<std::size_t>(size_of_headers, file_len))
        return std::nullopt;
      return rva;
    }
    for (const auto& s : *sections) {
      const std::uint32_t extent = s.virtual_extent();
      if (extent == 0 || rva < s.virtual_rva || rva - s.virtual_rva >= extent) continue;
      const std::uint32_t delta = rva - s.virtual_rva;
      if (static_cast<std::size_t>(delta) + span > s.raw_size) return std::nullopt;
      const std::size_t off = static_cast<std::size_t>(s.raw_offset) + delta;
      if (off + span > file_len) return std::nullopt;
      return off;
    }
    return std::nullopt;
  }

  // NUL-terminated string at an RVA, bounded by kMaxNameLength.
  std::optional<std::string> read_string(ByteView b, std::uint32_t rva) const {
    std::string out;
    for (std::size_t i = 0; i < kMaxNameLength; ++i) {
      auto off = map(rva + static_cast<std::uint32_t>(i), 1);
      if (!off) return std::nullopt;
      const std::uint8_t c = b[*off];
      if (c == 0) return out;
      out.push_back(static_cast<char>(c));
    }
    return std::nullopt;
  }
};

struct ImportWalk {
  std::vector<ImportDescriptor> imports;
  bool ok = true;
  Errc code = Errc::MalformedHeader;
  std::string error;

  void fail(Errc c, std::string msg) {
    ok = false;
    code = c;
    error = std::move(msg);
  }
};

ImportWalk walk_imports(ByteView b, const RvaMapper& mapper, const DataDirectory& dir, bool plus) {
  ImportWalk walk;
  if (!dir.present()) return walk;
  const std::size_t thunk_width = plus ? 8 : 4;
  const std::uint64_t ordinal_flag = plus ? (1ULL << 63) : (1ULL << 31);
  for (std::size_t i = 0;; ++i) {
    if (i >= kMaxImportDescriptors) {
      walk.fail(Errc::MalformedHeader, "unterminated import descriptor table");
      return walk;
    }
    auto desc_off = mapper.map(dir.rva + static_cast<std::uint32_t>(20 * i), 20);
    if (!desc_off) {
      walk.fail(Errc::OutOfBounds, "import descriptor outside mapped data");
      return walk;
    }
    const std::uint32_t original_first_thunk = read_u32(b, *desc_off);
    const std::uint32_t name_rva = read_u32(b, *desc_off + 12);
    const std::uint32_t first_thunk = read_u32(b, *desc_off + 16);
    if (original_first_thunk == 0 && name_rva == 0 && first_thunk == 0) return walk;

    ImportDescriptor desc;
    auto name = mapper.read_string(b, name_rva);
    if (!name || name->empty()) {
      walk.fail(Errc::MalformedHeader, "import descriptor with unreadable dll name");
      return walk;
    }
    desc.dll_name = *name;

    const std::uint32_t thunk_base = original_first_thunk != 0 ? original_first_thunk : first_thunk;
    if (thunk_base == 0) {
      walk.fail(Errc::MalformedHeader, "import descriptor without thunk array");
      return walk;
    }
    for (std::size_t t = 0;; ++t) {
      if (t >= kMaxThunksPerDescriptor) {
        walk.fail(Errc::MalformedHeader, "unterminated import thunk array");
        return walk;
      }
      auto thunk_off = mapper.map(thunk_base + static_cast<std::uint32_t>(thunk_width * t), thunk_width);
      if (!thunk_off) {
        walk.fail(Errc::OutOfBounds, "import thunk outside mapped data");
        return walk;
      }
      const std::uint64_t entry = plus ? read_u64(b, *thunk_off) : read_u32(b, *thunk_off);
      if (entry == 0) break;
      if (entry & ordinal_flag) {
        desc.imported_symbols.push_back("#" + std::to_string(entry & 0xFFFF));
      } else {
        auto sym = mapper.read_string(b, static_cast<std::uint32_t>(entry) + 2);
        if (!sym || sym->empty()) {
          walk.fail(Errc::OutOfBounds, "import hint/name outside mapped data");
          return walk;
        }
        desc.imported_symbols.push_back(*sym);
      }
    }
    if (desc.imported_symbols.empty()) {
      walk.fail(Errc::MalformedHeader, "import descriptor with empty symbol list");
      return walk;
    }
    walk.imports.push_back(std::move(desc));
  }
}

}  // namespace

PeBinary parse_pe(ByteView bytes) {
  if (bytes.empty()) raise(Errc::MalformedHeader, "empty input");
  if (bytes.size() < 0x40) raise(Errc::MalformedHeader, "file too small for DOS header");

  PeBinary pe;
  pe.raw.assign(bytes.begin(), bytes.end());
  pe.dos_header.magic = read_u16(bytes, 0);
  if (pe.dos_header.magic != kDosMagic) raise(Errc::MalformedHeader, "missing MZ magic");
  pe.dos_header.pe_offset = read_u32(bytes, 0x3C);

  const std::size_t pe_off = pe.dos_header.pe_offset;
  if (pe_off + 24 > bytes.size()) raise(Errc::MalformedHeader, "truncated NT headers");
  if (read_u32(bytes, pe_off) != kPeSignature) raise(Errc::MalformedHeader, "missing PE signature");

  auto& layout = pe.layout;
  layout.coff_offset = pe_off + 4;
  pe.coff_header.machine = read_u16(bytes, layout.coff_offset);
  pe.coff_header.section_count = read_u16(bytes, layout.coff_offset + 2);
  pe.coff_header.timestamp = read_u32(bytes, layout.coff_offset + 4);
  pe.coff_header.size_of_optional_header = read_u16(bytes, layout.coff_offset + 16);
  pe.coff_header.characteristics = read_u16(bytes, layout.coff_offset + 18);
  layout.timestamp_offset = layout.coff_offset + 4;
  layout.section_count_offset = layout.coff_offset + 2;

  layout.optional_offset = layout.coff_offset + 20;
  const std::size_t opt_off = layout.optional_offset;
  const std::size_t opt_size = pe.coff_header.size_of_optional_header;
  if (opt_off + opt_size > bytes.size()) raise(Errc::OutOfBounds, "optional header exceeds file");
  if (opt_size < 2) raise(Errc::MalformedHeader, "optional header too small");

  auto& opt = pe.optional_header;
  opt.magic = read_u16(bytes, opt_off);
  if (opt.magic == kOptMagicPe32Plus) {
    opt.plus = true;
  } else if (opt.magic != kOptMagicPe32) {
    raise(Errc::MalformedHeader, "unknown optional header magic");
  }
  const std::size_t fixed_size = opt.plus ? 112 : 96;
  if (opt_size < fixed_size) raise(Errc::MalformedHeader, "optional header smaller than fixed part");

  opt.entry_point_rva = read_u32(bytes, opt_off + 16);
  opt.image_base = opt.plus ? read_u64(bytes, opt_off + 24) : read_u32(bytes, opt_off + 28);
  opt.section_alignment = read_u32(bytes, opt_off + 32);
  opt.file_alignment = read_u32(bytes, opt_off + 36);
  opt.size_of_image = read_u32(bytes, opt_off + 56);
  opt.size_of_headers = read_u32(bytes, opt_off + 60);
  opt.checksum = read_u32(bytes, opt_off + 64);
  layout.checksum_offset = opt_off + 64;
  layout.size_of_image_offset = opt_off + 56;

  opt.rva_and_sizes_count = read_u32(bytes, opt_off + (opt.plus ? 108 : 104));
  if (opt.rva_and_sizes_count > kDirCount)
    raise(Errc::MalformedHeader, "data directory count exceeds 16");
  layout.data_directory_offset = opt_off + (opt.plus ? 112 : 96);
  if (opt_size < fixed_size + 8 * opt.rva_and_sizes_count)
    raise(Errc::MalformedHeader, "optional header does not cover data directories");
  for (std::size_t i = 0; i < opt.rva_and_sizes_count; ++i) {
    opt.data_directories[i].rva = read_u32(bytes, layout.directory_entry_offset(i));
    opt.data_directories[i].size = read_u32(bytes, layout.directory_entry_offset(i) + 4);
  }

  layout.section_table_offset = opt_off + opt_size;
  const std::size_t n_sections = pe.coff_header.section_count;
  if (layout.section_table_offset + 40 * n_sections > bytes.size())
    raise(Errc::OutOfBounds, "section table exceeds file");

  std::uint64_t max_raw_end = 0;
  for (std::size_t i = 0; i < n_sections; ++i) {
    const std::size_t off = layout.section_entry_offset(i);
    SectionEntry s;
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(off), 8, s.name.begin());
    s.virtual_size = read_u32(bytes, off + 8);
    s.virtual_rva = read_u32(bytes, off + 12);
    s.raw_size = read_u32(bytes, off + 16);
    s.raw_offset = read_u32(bytes, off + 20);
    s.characteristics = read_u32(bytes, off + 36);
    if (s.raw_size > 0 && s.raw_end() > bytes.size())
      raise(Errc::OutOfBounds, "section raw data exceeds file: " + s.name_str());
    if (s.raw_size > 0) max_raw_end = std::max(max_raw_end, s.raw_end());
    pe.sections.push_back(s);
  }

  const std::size_t headers_end = std::min<std::size_t>(opt.size_of_headers, bytes.size());
  pe.overlay.offset = pe.sections.empty()
                          ? bytes.size()
                          : std::max<std::size_t>(static_cast<std::size_t>(max_raw_end), headers_end);
  pe.overlay.length = bytes.size() - pe.overlay.offset;

  RvaMapper mapper{&pe.sections, opt.size_of_headers, bytes.size()};
  if (kDirImport < opt.rva_and_sizes_count) {
    ImportWalk walk = walk_imports(bytes, mapper, opt.data_directories[kDirImport], opt.plus);
    if (!walk.ok) raise(walk.code, walk.error);
    pe.imports = std::move(walk.imports);
  }
  return pe;
}

Bytes serialize_pe(const PeBinary& pe) {
  // The model mirrors its byte image at all times (edits patch bytes and
  // re-parse), so serialization re-emits the retained image.
  return pe.raw;
}

std::uint32_t compute_checksum(ByteView bytes) {
  if (bytes.size() < 0x40 || read_u16(bytes, 0) != kDosMagic)
    raise(Errc::MalformedHeader, "missing MZ magic");
  const std::size_t pe_off = read_u32(bytes, 0x3C);
  if (pe_off + 24 > bytes.size() || read_u32(bytes, pe_off) != kPeSignature)
    raise(Errc::MalformedHeader, "missing PE signature");
  const std::size_t ck_off = pe_off + 24 + 64;
  if (ck_off + 4 > bytes.size()) raise(Errc::MalformedHeader, "checksum field outside file");

  auto byte_at = [&](std::size_t i) -> std::uint32_t {
    if (i >= ck_off && i < ck_off + 4) return 0;  // checksum field reads as zero
    return bytes[i];
  };
  std::uint32_t sum = 0;
  const std::size_t even_len = bytes.size() & ~std::size_t{1};
  for (std::size_t i = 0; i < even_len; i += 2) {
    sum += byte_at(i) | (byte_at(i + 1) << 8);
    sum = (sum & 0xFFFF) + (sum >> 16);
  }
  if (bytes.size() & 1) {
    sum += byte_at(bytes.size() - 1);
    sum = (sum & 0xFFFF) + (sum >> 16);
  }
  sum = (sum & 0xFFFF) + (sum >> 16);
  return sum + static_cast<std::uint32_t>(bytes.size());
}

namespace {

void check_directories(ByteView b, const RvaMapper& mapper, const OptionalHeader& opt,
                       ValidationReport& report) {
  for (std::size_t i = 0; i < opt.rva_and_sizes_count; ++i) {
    const DataDirectory& dir = opt.data_directories[i];
    if (!dir.present()) continue;
    if (i == kDirSecurity) {
      // Security directory holds a file offset, not an RVA.
      if (static_cast<std::uint64_t>(dir.rva) + dir.size > b.size())
        report.violations.push_back(
            {Violation::OutOfBoundsDirectory, "security directory span exceeds file"});
      continue;
    }
    if (!mapper.map(dir.rva, dir.size))
      report.violations.push_back({Violation::OutOfBoundsDirectory,
                                   "directory " + std::to_string(i) + " span not file-backed"});
  }
}

}  // namespace

ValidationReport validate_bytes(ByteView bytes) {
  ValidationReport report;
  auto finish = [&report]() -> ValidationReport& {
    report.is_valid = report.violations.empty();
    return report;
  };

  if (bytes.size() < 0x40 || read_u16(bytes, 0) != kDosMagic) {
    report.violations.push_back({Violation::BadDosMagic, "missing or truncated MZ header"});
    return finish();
  }
  const std::size_t pe_off = read_u32(bytes, 0x3C);
  if (pe_off + 24 > bytes.size()) {
    report.violations.push_back({Violation::TruncatedHeader, "NT headers exceed file"});
    return finish();
  }
  if (read_u32(bytes, pe_off) != kPeSignature) {
    report.violations.push_back({Violation::BadPeMagic, "missing PE signature"});
    return finish();
  }
  const std::size_t n_sections = read_u16(bytes, pe_off + 6);
  const std::size_t opt_size = read_u16(bytes, pe_off + 20);
  const std::size_t opt_off = pe_off + 24;
  if (opt_off + opt_size > bytes.size() || opt_size < 2) {
    report.violations.push_back({Violation::TruncatedHeader, "optional header exceeds file"});
    return finish();
  }
  const std::uint16_t magic = read_u16(bytes, opt_off);
  if (magic != kOptMagicPe32 && magic != kOptMagicPe32Plus) {
    report.violations.push_back({Violation::BadPeMagic, "unknown optional header magic"});
    return finish();
  }
  const bool plus = magic == kOptMagicPe32Plus;
  const std::size_t fixed_size = plus ? 112 : 96;
  if (opt_size < fixed_size) {
    report.violations.push_back({Violation::TruncatedHeader, "optional header too small"});
    return finish();
  }

  OptionalHeader opt;
  opt.plus = plus;
  opt.entry_point_rva = read_u32(bytes, opt_off + 16);
  opt.size_of_headers = read_u32(bytes, opt_off + 60);
  opt.rva_and_sizes_count = read_u32(bytes, opt_off + (plus ? 108 : 104));
  if (opt.rva_and_sizes_count > kDirCount || opt_size < fixed_size + 8 * opt.rva_and_sizes_count) {
    report.violations.push_back({Violation::TruncatedHeader, "data directories exceed optional header"});
    return finish();
  }
  for (std::size_t i = 0; i < opt.rva_and_sizes_count; ++i) {
    opt.data_directories[i].rva = read_u32(bytes, opt_off + fixed_size + 8 * i);
    opt.data_directories[i].size = read_u32(bytes, opt_off + fixed_size + 8 * i + 4);
  }

  const std::size_t sect_off = opt_off + opt_size;
  if (sect_off + 40 * n_sections > bytes.size()) {
    report.violations.push_back({Violation::TruncatedHeader, "section table exceeds file"});
    return finish();
  }
  std::vector<SectionEntry> sections;
  for (std::size_t i = 0; i < n_sections; ++i) {
    const std::size_t off = sect_off + 40 * i;
    SectionEntry s;
    std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(off), 8, s.name.begin());
    s.virtual_size = read_u32(bytes, off + 8);
    s.virtual_rva = read_u32(bytes, off + 12);
    s.raw_size = read_u32(bytes, off + 16);
    s.raw_offset = read_u32(bytes, off + 20);
    s.characteristics = read_u32(bytes, off + 36);
    sections.push_back(s);
  }

  for (const auto& s : sections) {
    if (s.raw_size == 0) continue;
    if (s.raw_end() > bytes.size())
      report.violations.push_back(
          {Violation::OutOfBoundsSection, "raw span of " + s.name_str() + " exceeds file"});
    if (s.raw_offset < opt.size_of_headers)
      report.violations.push_back(
          {Violation::SectionOverlapsHeaders, s.name_str() + " raw data overlaps headers"});
  }
  for (std::size_t i = 0; i < sections.size(); ++i) {
    for (std::size_t j = i + 1; j < sections.size(); ++j) {
      const auto& a = sections[i];
      const auto& b2 = sections[j];
      if (a.raw_size == 0 || b2.raw_size == 0) continue;
      if (a.raw_offset < b2.raw_end() && b2.raw_offset < a.raw_end())
        report.violations.push_back({Violation::SectionOverlapsSection,
                                     a.name_str() + " overlaps " + b2.name_str()});
    }
  }

  RvaMapper mapper{&sections, opt.size_of_headers, bytes.size()};
  check_directories(bytes, mapper, opt, report);

  if (opt.entry_point_rva != 0) {
    bool mapped = false;
    for (const auto& s : sections) {
      const std::uint32_t extent = s.virtual_extent();
      if (extent != 0 && opt.entry_point_rva >= s.virtual_rva &&
          opt.entry_point_rva - s.virtual_rva < extent) {
        mapped = true;
        break;
      }
    }
    if (!mapped)
      report.violations.push_back({Violation::DanglingEntryPoint, "entry point in no section"});
  }

  if (kDirImport < opt.rva_and_sizes_count && opt.data_directories[kDirImport].present()) {
    ImportWalk walk = walk_imports(bytes, mapper, opt.data_directories[kDirImport], plus);
    if (!walk.ok)
      report.violations.push_back({Violation::MalformedImportThunk, walk.error});
  }
  return finish();
}

ValidationReport validate_structure(const PeBinary& pe) {
  ValidationReport report = validate_bytes(pe.raw);
  if (pe.sections.size() != pe.coff_header.section_count) {
    report.violations.push_back({Violation::SectionCountMismatch, "model section list desynced"});
    report.is_valid = false;
  }
  return report;
}

}  // namespace obf::pe
