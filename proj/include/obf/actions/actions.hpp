#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "obf/actions/benign_assets.hpp"
#include "obf/pe/model.hpp"
#include "obf/rng.hpp"

namespace obf::actions {

// The closed 12-variant mutation vocabulary. The integer encoding is stable
// and doubles as the agent's output index.
enum class MutationAction : int {
  OverlayAppend = 0,
  ImportsAppend = 1,
  SectionRename = 2,
  RemoveSignature = 3,
  RemoveDebug = 4,
  SectionAppend = 5,
  BreakChecksum = 6,
  ChangeTimestamp = 7,
  UpxPack = 8,
  XorEL1 = 9,
  XorEL2 = 10,
  XorEL3 = 11,
};

inline constexpr int kActionCount = 12;

const char* action_name(MutationAction a);
std::optional<MutationAction> action_from_name(const std::string& name);
std::vector<MutationAction> all_actions();
// The nine actions that are not XOR obfuscation (the "RL without
// obfuscation" arm) and the three that are (the "obfuscation alone" arm).
std::vector<MutationAction> non_obfuscation_actions();
std::vector<MutationAction> obfuscation_actions();

// Ambient configuration for action application.
struct ActionContext {
  const BenignAssets* assets = nullptr;
  // External packer command template with {input}/{output} placeholders;
  // unset means the internal fallback packer.
  std::optional<std::string> packer_command;
};

// Draw ranges fixed by contract.
inline constexpr std::size_t kOverlayAppendMin = 128;
inline constexpr std::size_t kOverlayAppendMax = 4096;
inline constexpr std::size_t kSectionAppendMin = 512;
inline constexpr std::size_t kSectionAppendMax = 4096;
inline constexpr std::uint32_t kTimestampMin = 946684800;   // 2000-01-01
inline constexpr std::uint32_t kTimestampMax = 1577836800;  // 2020-01-01 (exclusive)

// Dispatcher. Output always passes validate_structure. Throws
// ActionInapplicable / AlreadyPacked when the action cannot apply (callers
// inside RL episodes degrade those to no-ops), LayoutConflict from the
// serializer, PackerFailed from an external packer.
pe::PeBinary apply_action(const pe::PeBinary& pe, MutationAction action, Rng& rng,
                          const ActionContext& ctx);

// Per-action operations.
pe::PeBinary overlay_append(const pe::PeBinary& pe, Rng& rng, const BenignAssets& assets);
pe::PeBinary overlay_append_bytes(const pe::PeBinary& pe, ByteView data);  // test hook
pe::PeBinary imports_append(const pe::PeBinary& pe, Rng& rng, const BenignAssets& assets);
pe::PeBinary section_rename(const pe::PeBinary& pe, Rng& rng, const BenignAssets& assets);
pe::PeBinary remove_signature(const pe::PeBinary& pe);
pe::PeBinary remove_debug(const pe::PeBinary& pe);
pe::PeBinary section_append(const pe::PeBinary& pe, Rng& rng, const BenignAssets& assets);
pe::PeBinary break_checksum(const pe::PeBinary& pe);
pe::PeBinary change_timestamp(const pe::PeBinary& pe, Rng& rng);

}  // namespace obf::actions
