#pragma once

#include <optional>
#include <string>

#include "obf/pe/model.hpp"

namespace obf::actions {

// Compresses the whole input image into a carrier whose payload section is
// named "UPX0" (the telltale packer artifact is left on purpose) plus a
// metadata section recording the original layout. When `external_command`
// is set, that command is invoked instead ({input}/{output} placeholders)
// and its output re-parsed; a nonzero exit raises PackerFailed. Re-packing
// an internally packed file raises AlreadyPacked.
pe::PeBinary upx_pack(const pe::PeBinary& pe, const std::optional<std::string>& external_command);

// True when the internal packer's metadata marker is present.
bool is_internally_packed(const pe::PeBinary& pe);

// Restores the original bytes from an internally packed carrier. Throws
// NotPacked on anything else.
Bytes unpack_internal(const pe::PeBinary& pe);

}  // namespace obf::actions
