#include "obf/pe/rewrite.hpp"

#include <algorithm>

namespace obf::pe {

PeBinary with_timestamp(const PeBinary& pe, std::uint32_t timestamp) {
  Bytes raw = pe.raw;
  write_u32(raw, pe.layout.timestamp_offset, timestamp);
  return parse_pe(raw);
}

PeBinary with_checksum_field(const PeBinary& pe, std::uint32_t value) {
  Bytes raw = pe.raw;
  write_u32(raw, pe.layout.checksum_offset, value);
  return parse_pe(raw);
}

PeBinary with_directory_entry(const PeBinary& pe, std::size_t index, std::uint32_t rva,
                              std::uint32_t size) {
  if (index >= pe.optional_header.rva_and_sizes_count)
    raise(Errc::LayoutConflict, "data directory " + std::to_string(index) + " not present");
  Bytes raw = pe.raw;
  write_u32(raw, pe.layout.directory_entry_offset(index), rva);
  write_u32(raw, pe.layout.directory_entry_offset(index) + 4, size);
  return parse_pe(raw);
}

PeBinary with_section_name(const PeBinary& pe, std::size_t section_index, const std::string& name) {
  if (section_index >= pe.sections.size())
    raise(Errc::OutOfBounds, "section index " + std::to_string(section_index));
  if (name.size() > 8) raise(Errc::LayoutConflict, "section name longer than 8 bytes");
  Bytes raw = pe.raw;
  const std::size_t off = pe.layout.section_entry_offset(section_index);
  for (std::size_t i = 0; i < 8; ++i)
    raw[off + i] = i < name.size() ? static_cast<std::uint8_t>(name[i]) : 0;
  return parse_pe(raw);
}

PeBinary with_overlay_appended(const PeBinary& pe, ByteView data) {
  Bytes raw = pe.raw;
  raw.insert(raw.end(), data.begin(), data.end());
  return parse_pe(raw);
}

std::uint32_t projected_section_rva(const PeBinary& pe) {
  const auto& opt = pe.optional_header;
  const std::uint32_t sect_align = std::max<std::uint32_t>(opt.section_alignment, 1);
  std::uint32_t va_end = align_up(opt.size_of_headers, sect_align);
  for (const auto& s : pe.sections)
    va_end = std::max(va_end, align_up(s.virtual_rva + std::max<std::uint32_t>(s.virtual_extent(), 1),
                                       sect_align));
  return va_end;
}

PeBinary with_appended_section(const PeBinary& pe, const std::string& name, ByteView data,
                               std::uint32_t characteristics) {
  if (name.size() > 8) raise(Errc::LayoutConflict, "section name longer than 8 bytes");
  const auto& opt = pe.optional_header;
  const std::size_t n = pe.sections.size();
  const std::size_t entry_off = pe.layout.section_entry_offset(n);
  if (entry_off + 40 > opt.size_of_headers)
    raise(Errc::LayoutConflict, "no header room for another section entry");

  const std::uint32_t file_align = std::max<std::uint32_t>(opt.file_alignment, 1);
  const std::uint32_t sect_align = std::max<std::uint32_t>(opt.section_alignment, 1);
  const std::uint32_t va_end = projected_section_rva(pe);

  Bytes raw = pe.raw;
  const std::size_t raw_off = align_up(raw.size(), static_cast<std::size_t>(file_align));
  raw.resize(raw_off, 0);
  raw.insert(raw.end(), data.begin(), data.end());
  raw.resize(align_up(raw.size(), static_cast<std::size_t>(file_align)), 0);

  SectionEntry s;
  for (std::size_t i = 0; i < 8; ++i)
    s.name[i] = i < name.size() ? static_cast<std::uint8_t>(name[i]) : 0;
  s.virtual_size = static_cast<std::uint32_t>(data.size());
  s.virtual_rva = va_end;
  s.raw_size = static_cast<std::uint32_t>(raw.size() - raw_off);
  s.raw_offset = static_cast<std::uint32_t>(raw_off);
  s.characteristics = characteristics;

  std::copy(s.name.begin(), s.name.end(), raw.begin() + static_cast<std::ptrdiff_t>(entry_off));
  write_u32(raw, entry_off + 8, s.virtual_size);
  write_u32(raw, entry_off + 12, s.virtual_rva);
  write_u32(raw, entry_off + 16, s.raw_size);
  write_u32(raw, entry_off + 20, s.raw_offset);
  write_u32(raw, entry_off + 24, 0);
  write_u32(raw, entry_off + 28, 0);
  write_u32(raw, entry_off + 32, 0);
  write_u32(raw, entry_off + 36, s.characteristics);

  write_u16(raw, pe.layout.section_count_offset, static_cast<std::uint16_t>(n + 1));
  write_u32(raw, pe.layout.size_of_image_offset,
            align_up(s.virtual_rva + std::max<std::uint32_t>(s.virtual_size, 1), sect_align));
  return parse_pe(raw);
}

ImportBlob build_import_blob(ByteView existing_descriptor_table, std::size_t existing_count,
                             const std::vector<ImportDescriptor>& added, std::uint32_t base_rva,
                             bool pe32plus) {
  const std::size_t thunk_width = pe32plus ? 8 : 4;
  const std::size_t desc_count = existing_count + added.size() + 1;  // + null terminator
  const std::size_t table_size = desc_count * 20;

  // Layout: descriptor table, then per added descriptor its thunk arrays,
  // hint/name entries, and dll name string.
  Bytes blob(table_size, 0);
  if (existing_count > 0) {
    if (existing_descriptor_table.size() < existing_count * 20)
      raise(Errc::OutOfBounds, "existing import descriptor table too short");
    std::copy_n(existing_descriptor_table.begin(), existing_count * 20, blob.begin());
  }

  struct PendingDescriptor {
    std::size_t desc_offset;
    std::uint32_t oft_rva = 0;
    std::uint32_t ft_rva = 0;
    std::uint32_t name_rva = 0;
  };

  std::vector<PendingDescriptor> pending;
  for (std::size_t d = 0; d < added.size(); ++d) {
    const ImportDescriptor& desc = added[d];
    if (desc.dll_name.empty()) raise(Errc::LayoutConflict, "import descriptor needs a dll name");
    if (desc.imported_symbols.empty())
      raise(Errc::LayoutConflict, "import descriptor needs at least one symbol");
    PendingDescriptor p;
    p.desc_offset = (existing_count + d) * 20;

    // Hint/name entries, 2-byte hint then NUL-terminated name, even-padded.
    std::vector<std::uint32_t> symbol_rvas;
    for (const auto& sym : desc.imported_symbols) {
      blob.resize(align_up(blob.size(), std::size_t{2}), 0);
      symbol_rvas.push_back(base_rva + static_cast<std::uint32_t>(blob.size()));
      append_u16(blob, 0);
      for (char c : sym) blob.push_back(static_cast<std::uint8_t>(c));
      blob.push_back(0);
    }

    blob.resize(align_up(blob.size(), thunk_width), 0);
    p.oft_rva = base_rva + static_cast<std::uint32_t>(blob.size());
    for (std::uint32_t rva : symbol_rvas) {
      if (pe32plus)
        append_u64(blob, rva);
      else
        append_u32(blob, rva);
    }
    blob.insert(blob.end(), thunk_width, 0);

    p.ft_rva = base_rva + static_cast<std::uint32_t>(blob.size());
    for (std::uint32_t rva : symbol_rvas) {
      if (pe32plus)
        append_u64(blob, rva);
      else
        append_u32(blob, rva);
    }
    blob.insert(blob.end(), thunk_width, 0);

    p.name_rva = base_rva + static_cast<std::uint32_t>(blob.size());
    for (char c : desc.dll_name) blob.push_back(static_cast<std::uint8_t>(c));
    blob.push_back(0);
    pending.push_back(p);
  }

  for (const auto& p : pending) {
    write_u32(blob, p.desc_offset, p.oft_rva);
    write_u32(blob, p.desc_offset + 12, p.name_rva);
    write_u32(blob, p.desc_offset + 16, p.ft_rva);
  }

  return ImportBlob{std::move(blob), static_cast<std::uint32_t>(table_size)};
}

}  // namespace obf::pe
