#pragma once

#include <optional>
#include <string>
#include <vector>

#include "obf/pe/model.hpp"

namespace obf::pe {

// Declarative plan for assembling a well-formed PE image from scratch.
// Used by the synthetic corpus generator and the stub carriers.
struct SectionPlan {
  std::string name;
  Bytes data;
  std::uint32_t characteristics = kScnInitializedData | kScnMemRead;
};

struct ImportPlan {
  std::vector<ImportDescriptor> descriptors;  // placed in an ".idata" section
};

struct BuildPlan {
  bool pe32plus = false;
  std::uint32_t timestamp = 0;
  std::vector<SectionPlan> sections;
  // Entry point: (section index, offset within that section). Negative
  // section index leaves the entry point at zero.
  int entry_section = 0;
  std::uint32_t entry_offset = 0;
  std::optional<ImportPlan> imports;
  bool set_valid_checksum = true;
  std::optional<Bytes> certificate_data;  // appended as overlay, security directory set
  bool debug_directory = false;           // small debug directory in its own section
  Bytes overlay_extra;                    // plain trailing bytes
  // Section table slots kept free for later edits.
  std::uint32_t spare_section_slots = 8;
};

// Final numeric layout of a built image, for parser cross-checks.
struct BuiltSection {
  std::string name;
  std::uint32_t virtual_rva = 0;
  std::uint32_t virtual_size = 0;
  std::uint32_t raw_offset = 0;
  std::uint32_t raw_size = 0;
  std::uint32_t characteristics = 0;
};

struct BuildLayout {
  bool pe32plus = false;
  std::uint32_t timestamp = 0;
  std::uint16_t section_count = 0;
  std::uint32_t entry_point_rva = 0;
  std::uint32_t size_of_headers = 0;
  std::uint32_t size_of_image = 0;
  std::uint32_t checksum = 0;
  std::vector<BuiltSection> sections;
  std::vector<ImportDescriptor> imports;
  std::size_t overlay_offset = 0;
  std::size_t overlay_length = 0;
  std::size_t file_length = 0;
};

struct BuildResult {
  Bytes bytes;
  BuildLayout layout;
};

// Assembles the image. The output always satisfies validate_bytes.
BuildResult build_pe(const BuildPlan& plan);

}  // namespace obf::pe
