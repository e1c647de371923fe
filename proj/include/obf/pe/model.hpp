#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "obf/bytes.hpp"

namespace obf::pe {

// Section characteristics bits used by this project.
inline constexpr std::uint32_t kScnCode = 0x00000020;
inline constexpr std::uint32_t kScnInitializedData = 0x00000040;
inline constexpr std::uint32_t kScnMemExecute = 0x20000000;
inline constexpr std::uint32_t kScnMemRead = 0x40000000;
inline constexpr std::uint32_t kScnMemWrite = 0x80000000;

// Data directory indices.
inline constexpr std::size_t kDirExport = 0;
inline constexpr std::size_t kDirImport = 1;
inline constexpr std::size_t kDirSecurity = 4;   // file offset, not RVA
inline constexpr std::size_t kDirBaseReloc = 5;
inline constexpr std::size_t kDirDebug = 6;
inline constexpr std::size_t kDirIat = 12;
inline constexpr std::size_t kDirCount = 16;

struct DosHeader {
  std::uint16_t magic = 0;      // "MZ"
  std::uint32_t pe_offset = 0;  // e_lfanew
};

struct CoffHeader {
  std::uint16_t machine = 0;
  std::uint16_t section_count = 0;
  std::uint32_t timestamp = 0;  // unix seconds
  std::uint16_t size_of_optional_header = 0;
  std::uint16_t characteristics = 0;
};

struct DataDirectory {
  std::uint32_t rva = 0;
  std::uint32_t size = 0;
  bool present() const { return rva != 0 || size != 0; }
};

struct OptionalHeader {
  std::uint16_t magic = 0;  // 0x10B PE32, 0x20B PE32+
  bool plus = false;
  std::uint32_t entry_point_rva = 0;
  std::uint64_t image_base = 0;
  std::uint32_t section_alignment = 0;
  std::uint32_t file_alignment = 0;
  std::uint32_t size_of_image = 0;
  std::uint32_t size_of_headers = 0;
  std::uint32_t checksum = 0;
  std::uint32_t rva_and_sizes_count = 0;
  std::array<DataDirectory, kDirCount> data_directories{};
};

struct SectionEntry {
  std::array<std::uint8_t, 8> name{};
  std::uint32_t virtual_size = 0;
  std::uint32_t virtual_rva = 0;
  std::uint32_t raw_size = 0;
  std::uint32_t raw_offset = 0;
  std::uint32_t characteristics = 0;

  std::string name_str() const;
  std::uint64_t raw_end() const { return std::uint64_t(raw_offset) + raw_size; }
  // Loader-visible extent; zero virtual_size falls back to the raw size.
  std::uint32_t virtual_extent() const { return virtual_size != 0 ? virtual_size : raw_size; }
};

struct ImportDescriptor {
  std::string dll_name;
  std::vector<std::string> imported_symbols;
};

struct Overlay {
  std::size_t offset = 0;
  std::size_t length = 0;
};

// Byte offsets of rewritable header fields, captured at parse time.
struct HeaderLayout {
  std::size_t coff_offset = 0;
  std::size_t optional_offset = 0;
  std::size_t timestamp_offset = 0;
  std::size_t section_count_offset = 0;
  std::size_t checksum_offset = 0;
  std::size_t size_of_image_offset = 0;
  std::size_t data_directory_offset = 0;  // first entry
  std::size_t section_table_offset = 0;

  std::size_t directory_entry_offset(std::size_t index) const {
    return data_directory_offset + 8 * index;
  }
  std::size_t section_entry_offset(std::size_t index) const {
    return section_table_offset + 40 * index;
  }
};

// Parsed, rewritable model of a Portable Executable. The model is a view
// over `raw`: every field mirrors bytes in `raw`, and edits are performed by
// patching bytes and re-parsing. Values are immutable after construction and
// safe to share across threads.
struct PeBinary {
  Bytes raw;
  DosHeader dos_header;
  CoffHeader coff_header;
  OptionalHeader optional_header;
  std::vector<SectionEntry> sections;
  Overlay overlay;
  std::vector<ImportDescriptor> imports;
  HeaderLayout layout;

  std::size_t size() const { return raw.size(); }
  const SectionEntry* find_section(const std::string& name) const;
  // Section whose virtual span contains `rva`, or nullptr.
  const SectionEntry* section_for_rva(std::uint32_t rva) const;
  // Maps an RVA to a file offset (headers map identically). Throws
  // OutOfBounds when the RVA has no file-backed location.
  std::size_t rva_to_offset(std::uint32_t rva) const;
};

// Structural findings reported by the validator.
enum class Violation {
  BadDosMagic,
  BadPeMagic,
  TruncatedHeader,
  OutOfBoundsSection,
  SectionOverlapsHeaders,
  SectionOverlapsSection,
  SectionCountMismatch,
  OutOfBoundsDirectory,
  DanglingEntryPoint,
  MalformedImportThunk,
};

const char* violation_name(Violation v);

struct Finding {
  Violation code;
  std::string detail;
};

struct ValidationReport {
  bool is_valid = true;
  std::vector<Finding> violations;
};

// --- Operations ------------------------------------------------------------

// Parses a PE image. Throws MalformedHeader (bad magic, nonsense header) or
// OutOfBounds (structure span exceeds the file). Retains the input verbatim.
PeBinary parse_pe(ByteView bytes);

// Emits the byte image of the model. Unmodified models re-emit their
// original bytes exactly.
Bytes serialize_pe(const PeBinary& pe);

// Standard PE/COFF checksum: 16-bit word sum with end-around carry over the
// file with the checksum field zeroed, plus the file length. Throws
// MalformedHeader when the checksum field cannot be located.
std::uint32_t compute_checksum(ByteView bytes);

// Structural rule audit over arbitrary bytes; never throws, reports findings.
ValidationReport validate_bytes(ByteView bytes);

// Same audit over a parsed model (runs on the model's raw image).
ValidationReport validate_structure(const PeBinary& pe);

}  // namespace obf::pe
