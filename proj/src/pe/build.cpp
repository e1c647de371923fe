#include "obf/pe/build.hpp"

#include <algorithm>

#include "obf/pe/rewrite.hpp"

namespace obf::pe {

namespace {

constexpr std::uint32_t kSectionAlignment = 0x1000;
constexpr std::uint32_t kFileAlignment = 0x200;
constexpr std::size_t kDosHeaderSize = 0x40;

struct SectionGeometry {
  std::uint32_t rva = 0;
  std::uint32_t vsize = 0;
  std::uint32_t raw_offset = 0;
  std::uint32_t raw_size = 0;
};

void put_section_header(Bytes& image, std::size_t off, const std::string& name,
                        const SectionGeometry& g, std::uint32_t characteristics) {
  for (std::size_t i = 0; i < 8; ++i)
    image[off + i] = i < name.size() ? static_cast<std::uint8_t>(name[i]) : 0;
  write_u32(image, off + 8, g.vsize);
  write_u32(image, off + 12, g.rva);
  write_u32(image, off + 16, g.raw_size);
  write_u32(image, off + 20, g.raw_offset);
  write_u32(image, off + 36, characteristics);
}

}  // namespace

BuildResult build_pe(const BuildPlan& plan) {
  const bool plus = plan.pe32plus;
  const std::size_t opt_size = (plus ? 112 : 96) + 8 * kDirCount;

  // Working copy of the section list with derived sections appended.
  struct WorkSection {
    std::string name;
    Bytes data;
    std::uint32_t characteristics;
  };
  std::vector<WorkSection> work;
  work.reserve(plan.sections.size() + 2);
  for (const auto& s : plan.sections) work.push_back({s.name, s.data, s.characteristics});

  int import_section = -1;
  if (plan.imports && !plan.imports->descriptors.empty()) {
    // Size probe; the blob is rebuilt once the section RVA is known.
    ImportBlob probe = build_import_blob({}, 0, plan.imports->descriptors, 0, plus);
    import_section = static_cast<int>(work.size());
    work.push_back({".idata", std::move(probe.bytes), kScnInitializedData | kScnMemRead});
  }
  int debug_section = -1;
  if (plan.debug_directory) {
    Bytes dbg(28, 0);
    write_u32(dbg, 12, 2);  // IMAGE_DEBUG_TYPE_CODEVIEW, no payload
    debug_section = static_cast<int>(work.size());
    work.push_back({".dbgdir", std::move(dbg), kScnInitializedData | kScnMemRead});
  }

  const std::size_t n = work.size();
  const std::size_t table_slots = n + plan.spare_section_slots;
  const std::size_t headers_unaligned = kDosHeaderSize + 4 + 20 + opt_size + 40 * table_slots;
  const std::uint32_t size_of_headers =
      align_up(static_cast<std::uint32_t>(headers_unaligned), kFileAlignment);

  std::vector<SectionGeometry> geo(n);
  std::uint32_t va = align_up(size_of_headers, kSectionAlignment);
  std::uint32_t raw = size_of_headers;
  for (std::size_t i = 0; i < n; ++i) {
    geo[i].rva = va;
    geo[i].vsize = static_cast<std::uint32_t>(work[i].data.size());
    geo[i].raw_offset = raw;
    geo[i].raw_size = align_up(static_cast<std::uint32_t>(work[i].data.size()), kFileAlignment);
    va = align_up(va + std::max<std::uint32_t>(geo[i].vsize, 1), kSectionAlignment);
    raw += geo[i].raw_size;
  }
  const std::uint32_t size_of_image = va;

  if (import_section >= 0) {
    ImportBlob blob = build_import_blob({}, 0, plan.imports->descriptors,
                                        geo[static_cast<std::size_t>(import_section)].rva, plus);
    work[static_cast<std::size_t>(import_section)].data = std::move(blob.bytes);
  }

  std::uint32_t entry_rva = 0;
  if (plan.entry_section >= 0) {
    if (static_cast<std::size_t>(plan.entry_section) >= n)
      raise(Errc::LayoutConflict, "entry section index out of range");
    entry_rva = geo[static_cast<std::size_t>(plan.entry_section)].rva + plan.entry_offset;
  }

  Bytes image(raw, 0);

  // DOS header.
  image[0] = 'M';
  image[1] = 'Z';
  write_u16(image, 2, 0x90);
  write_u16(image, 4, 3);
  write_u32(image, 0x3C, kDosHeaderSize);

  // NT signature + COFF header.
  const std::size_t pe_off = kDosHeaderSize;
  image[pe_off] = 'P';
  image[pe_off + 1] = 'E';
  write_u16(image, pe_off + 4, plus ? 0x8664 : 0x014C);
  write_u16(image, pe_off + 6, static_cast<std::uint16_t>(n));
  write_u32(image, pe_off + 8, plan.timestamp);
  write_u16(image, pe_off + 20, static_cast<std::uint16_t>(opt_size));
  write_u16(image, pe_off + 22, plus ? 0x0022 : 0x0102);

  // Optional header.
  const std::size_t opt = pe_off + 24;
  write_u16(image, opt, plus ? 0x20B : 0x10B);
  image[opt + 2] = 14;  // linker major
  std::uint32_t size_of_code = 0;
  std::uint32_t size_of_idata = 0;
  std::uint32_t base_of_code = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (work[i].characteristics & kScnCode) {
      size_of_code += geo[i].raw_size;
      if (base_of_code == 0) base_of_code = geo[i].rva;
    } else {
      size_of_idata += geo[i].raw_size;
    }
  }
  write_u32(image, opt + 4, size_of_code);
  write_u32(image, opt + 8, size_of_idata);
  write_u32(image, opt + 16, entry_rva);
  write_u32(image, opt + 20, base_of_code);
  if (plus) {
    write_u64(image, opt + 24, 0x140000000ULL);
  } else {
    write_u32(image, opt + 24, n > 1 ? geo[1].rva : 0);  // BaseOfData
    write_u32(image, opt + 28, 0x400000);
  }
  write_u32(image, opt + 32, kSectionAlignment);
  write_u32(image, opt + 36, kFileAlignment);
  write_u16(image, opt + 40, 6);  // OS major
  write_u16(image, opt + 48, 6);  // subsystem major
  write_u32(image, opt + 56, size_of_image);
  write_u32(image, opt + 60, size_of_headers);
  write_u16(image, opt + 68, 3);  // console subsystem
  if (plus) {
    write_u64(image, opt + 72, 0x100000);
    write_u64(image, opt + 80, 0x1000);
    write_u64(image, opt + 88, 0x100000);
    write_u64(image, opt + 96, 0x1000);
    write_u32(image, opt + 108, kDirCount);
  } else {
    write_u32(image, opt + 72, 0x100000);
    write_u32(image, opt + 76, 0x1000);
    write_u32(image, opt + 80, 0x100000);
    write_u32(image, opt + 84, 0x1000);
    write_u32(image, opt + 92, kDirCount);
  }

  const std::size_t dir_off = opt + (plus ? 112 : 96);
  if (import_section >= 0) {
    write_u32(image, dir_off + 8 * kDirImport, geo[static_cast<std::size_t>(import_section)].rva);
    write_u32(image, dir_off + 8 * kDirImport + 4,
              static_cast<std::uint32_t>((plan.imports->descriptors.size() + 1) * 20));
  }
  if (debug_section >= 0) {
    write_u32(image, dir_off + 8 * kDirDebug, geo[static_cast<std::size_t>(debug_section)].rva);
    write_u32(image, dir_off + 8 * kDirDebug + 4, 28);
  }

  // Section table and raw data.
  const std::size_t table_off = opt + opt_size;
  for (std::size_t i = 0; i < n; ++i) {
    put_section_header(image, table_off + 40 * i, work[i].name, geo[i], work[i].characteristics);
    std::copy(work[i].data.begin(), work[i].data.end(),
              image.begin() + static_cast<std::ptrdiff_t>(geo[i].raw_offset));
  }

  // Overlay: optional certificate blob (security directory holds a file
  // offset), then any plain trailing bytes.
  if (plan.certificate_data) {
    const std::size_t cert_off = align_up(image.size(), std::size_t{8});
    image.resize(cert_off, 0);
    const std::uint32_t cert_len = static_cast<std::uint32_t>(8 + plan.certificate_data->size());
    append_u32(image, cert_len);
    append_u16(image, 0x0200);  // WIN_CERT_REVISION_2_0
    append_u16(image, 0x0002);  // WIN_CERT_TYPE_PKCS_SIGNED_DATA
    image.insert(image.end(), plan.certificate_data->begin(), plan.certificate_data->end());
    write_u32(image, dir_off + 8 * kDirSecurity, static_cast<std::uint32_t>(cert_off));
    write_u32(image, dir_off + 8 * kDirSecurity + 4, cert_len);
  }
  image.insert(image.end(), plan.overlay_extra.begin(), plan.overlay_extra.end());

  std::uint32_t checksum = 0;
  if (plan.set_valid_checksum) {
    checksum = compute_checksum(image);
    write_u32(image, opt + 64, checksum);
  }

  BuildLayout layout;
  layout.pe32plus = plus;
  layout.timestamp = plan.timestamp;
  layout.section_count = static_cast<std::uint16_t>(n);
  layout.entry_point_rva = entry_rva;
  layout.size_of_headers = size_of_headers;
  layout.size_of_image = size_of_image;
  layout.checksum = checksum;
  for (std::size_t i = 0; i < n; ++i)
    layout.sections.push_back({work[i].name, geo[i].rva, geo[i].vsize, geo[i].raw_offset,
                               geo[i].raw_size, work[i].characteristics});
  if (plan.imports) layout.imports = plan.imports->descriptors;
  layout.overlay_offset = raw;
  layout.overlay_length = image.size() - raw;
  layout.file_length = image.size();

  return BuildResult{std::move(image), std::move(layout)};
}

}  // namespace obf::pe
