#include "obf/actions/actions.hpp"

#include <algorithm>

#include "obf/actions/packer.hpp"
#include "obf/actions/xor_stub.hpp"
#include "obf/pe/rewrite.hpp"

namespace obf::actions {

namespace {

constexpr std::array<const char*, kActionCount> kActionNames = {
    "overlay-append",   "imports-append", "section-rename", "remove-signature",
    "remove-debug",     "section-append", "break-checksum", "change-timestamp",
    "upx-pack",         "xor-el1",        "xor-el2",        "xor-el3",
};

const BenignAssets& need_assets(const ActionContext& ctx) {
  if (ctx.assets == nullptr) raise(Errc::IoFailure, "action context has no benign assets");
  return *ctx.assets;
}

}  // namespace

const char* action_name(MutationAction a) {
  return kActionNames[static_cast<std::size_t>(static_cast<int>(a))];
}

std::optional<MutationAction> action_from_name(const std::string& name) {
  for (int i = 0; i < kActionCount; ++i)
    if (name == kActionNames[static_cast<std::size_t>(i)]) return static_cast<MutationAction>(i);
  return std::nullopt;
}

std::vector<MutationAction> all_actions() {
  std::vector<MutationAction> v;
  for (int i = 0; i < kActionCount; ++i) v.push_back(static_cast<MutationAction>(i));
  return v;
}

std::vector<MutationAction> non_obfuscation_actions() {
  std::vector<MutationAction> v;
  for (int i = 0; i < kActionCount; ++i) {
    const auto a = static_cast<MutationAction>(i);
    if (a != MutationAction::XorEL1 && a != MutationAction::XorEL2 && a != MutationAction::XorEL3)
      v.push_back(a);
  }
  return v;
}

std::vector<MutationAction> obfuscation_actions() {
  return {MutationAction::XorEL1, MutationAction::XorEL2, MutationAction::XorEL3};
}

pe::PeBinary overlay_append(const pe::PeBinary& pe, Rng& rng, const BenignAssets& assets) {
  const std::size_t k = rng.uniform_range(kOverlayAppendMin, kOverlayAppendMax);
  return overlay_append_bytes(pe, assets.draw_pool_bytes(k, rng));
}

pe::PeBinary overlay_append_bytes(const pe::PeBinary& pe, ByteView data) {
  return pe::with_overlay_appended(pe, data);
}

pe::PeBinary imports_append(const pe::PeBinary& pe, Rng& rng, const BenignAssets& assets) {
  const auto& [dll, symbol] = assets.draw_import(rng);
  pe::ImportDescriptor added;
  added.dll_name = dll;
  added.imported_symbols.push_back(symbol);

  // Existing descriptors are copied verbatim from the current table so their
  // internal RVAs stay valid; only the table itself moves.
  ByteView existing_table{};
  const auto& dir = pe.optional_header.data_directories[pe::kDirImport];
  if (dir.present() && !pe.imports.empty()) {
    const std::size_t off = pe.rva_to_offset(dir.rva);
    const std::size_t span = 20 * pe.imports.size();
    if (off + span > pe.raw.size()) raise(Errc::OutOfBounds, "import table span");
    existing_table = ByteView{pe.raw.data() + off, span};
  }

  const std::uint32_t base_rva = pe::projected_section_rva(pe);
  pe::ImportBlob blob =
      pe::build_import_blob(existing_table, pe.imports.size(), {added}, base_rva, pe.optional_header.plus);
  pe::PeBinary out = pe::with_appended_section(pe, ".idata2", blob.bytes,
                                               pe::kScnInitializedData | pe::kScnMemRead);
  return pe::with_directory_entry(out, pe::kDirImport, base_rva, blob.directory_size);
}

pe::PeBinary section_rename(const pe::PeBinary& pe, Rng& rng, const BenignAssets& assets) {
  if (pe.sections.empty()) raise(Errc::ActionInapplicable, "no sections to rename");
  const std::size_t index = rng.uniform_u64(pe.sections.size());
  const std::string& name = assets.draw_section_name(rng);
  return pe::with_section_name(pe, index, name);
}

pe::PeBinary remove_signature(const pe::PeBinary& pe) {
  // Unlinks the certificate entry; the certificate bytes stay in the overlay.
  if (pe::kDirSecurity >= pe.optional_header.rva_and_sizes_count) return pe;
  if (!pe.optional_header.data_directories[pe::kDirSecurity].present()) return pe;
  return pe::with_directory_entry(pe, pe::kDirSecurity, 0, 0);
}

pe::PeBinary remove_debug(const pe::PeBinary& pe) {
  if (pe::kDirDebug >= pe.optional_header.rva_and_sizes_count) return pe;
  if (!pe.optional_header.data_directories[pe::kDirDebug].present()) return pe;
  return pe::with_directory_entry(pe, pe::kDirDebug, 0, 0);
}

pe::PeBinary section_append(const pe::PeBinary& pe, Rng& rng, const BenignAssets& assets) {
  const std::size_t k = rng.uniform_range(kSectionAppendMin, kSectionAppendMax);
  const Bytes data = assets.draw_pool_bytes(k, rng);
  const std::string& name = assets.draw_section_name(rng);
  return pe::with_appended_section(pe, name, data, pe::kScnInitializedData | pe::kScnMemRead);
}

pe::PeBinary break_checksum(const pe::PeBinary& pe) { return pe::with_checksum_field(pe, 0); }

pe::PeBinary change_timestamp(const pe::PeBinary& pe, Rng& rng) {
  const auto ts = static_cast<std::uint32_t>(rng.uniform_range(kTimestampMin, kTimestampMax - 1));
  return pe::with_timestamp(pe, ts);
}

pe::PeBinary apply_action(const pe::PeBinary& pe, MutationAction action, Rng& rng,
                          const ActionContext& ctx) {
  switch (action) {
    case MutationAction::OverlayAppend: return overlay_append(pe, rng, need_assets(ctx));
    case MutationAction::ImportsAppend: return imports_append(pe, rng, need_assets(ctx));
    case MutationAction::SectionRename: return section_rename(pe, rng, need_assets(ctx));
    case MutationAction::RemoveSignature: return remove_signature(pe);
    case MutationAction::RemoveDebug: return remove_debug(pe);
    case MutationAction::SectionAppend: return section_append(pe, rng, need_assets(ctx));
    case MutationAction::BreakChecksum: return break_checksum(pe);
    case MutationAction::ChangeTimestamp: return change_timestamp(pe, rng);
    case MutationAction::UpxPack: return upx_pack(pe, ctx.packer_command);
    case MutationAction::XorEL1: return xor_obfuscate(pe, 1, rng);
    case MutationAction::XorEL2: return xor_obfuscate(pe, 2, rng);
    case MutationAction::XorEL3: return xor_obfuscate(pe, 3, rng);
  }
  raise(Errc::UnknownAction, "unhandled action id");
}

}  // namespace obf::actions
