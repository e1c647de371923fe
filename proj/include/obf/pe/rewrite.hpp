#pragma once

#include <map>
#include <string>
#include <vector>

#include "obf/pe/model.hpp"

namespace obf::pe {

// Byte-level edit primitives. Each returns a freshly parsed model so the
// value-semantics contract holds: inputs are never modified.

PeBinary with_timestamp(const PeBinary& pe, std::uint32_t timestamp);
PeBinary with_checksum_field(const PeBinary& pe, std::uint32_t value);
PeBinary with_directory_entry(const PeBinary& pe, std::size_t index, std::uint32_t rva,
                              std::uint32_t size);
PeBinary with_section_name(const PeBinary& pe, std::size_t section_index, const std::string& name);
PeBinary with_overlay_appended(const PeBinary& pe, ByteView data);

// Appends one section whose raw data is placed at the aligned end of the
// file. Throws LayoutConflict when the header area has no room for another
// section table entry.
PeBinary with_appended_section(const PeBinary& pe, const std::string& name, ByteView data,
                               std::uint32_t characteristics);

// RVA the next appended section will receive; lets callers build
// RVA-dependent content before appending it.
std::uint32_t projected_section_rva(const PeBinary& pe);

// Serialized import directory image rebased at `base_rva`, plus the
// directory size to advertise. Existing descriptors are copied verbatim so
// their internal RVAs stay valid; `added` descriptors get fresh structures
// inside the blob.
struct ImportBlob {
  Bytes bytes;
  std::uint32_t directory_size = 0;
};

ImportBlob build_import_blob(ByteView existing_descriptor_table, std::size_t existing_count,
                             const std::vector<ImportDescriptor>& added, std::uint32_t base_rva,
                             bool pe32plus);

}  // namespace obf::pe
