#include "obf/errors.hpp"

namespace obf {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MalformedHeader: return "MalformedHeader";
    case Errc::OutOfBounds: return "OutOfBounds";
    case Errc::LayoutConflict: return "LayoutConflict";
    case Errc::ActionInapplicable: return "ActionInapplicable";
    case Errc::PackerFailed: return "PackerFailed";
    case Errc::AlreadyPacked: return "AlreadyPacked";
    case Errc::NotAStub: return "NotAStub";
    case Errc::NotPacked: return "NotPacked";
    case Errc::DegenerateCorpus: return "DegenerateCorpus";
    case Errc::ScanFailed: return "ScanFailed";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::SampleNotDetected: return "SampleNotDetected";
    case Errc::EpisodeFinished: return "EpisodeFinished";
    case Errc::EpisodeActive: return "EpisodeActive";
    case Errc::BufferTooSmall: return "BufferTooSmall";
    case Errc::BadMagic: return "BadMagic";
    case Errc::VersionMismatch: return "VersionMismatch";
    case Errc::InvalidCounts: return "InvalidCounts";
    case Errc::NoAttackableSamples: return "NoAttackableSamples";
    case Errc::IoFailure: return "IoFailure";
    case Errc::UnknownAction: return "UnknownAction";
  }
  return "UnknownError";
}

}  // namespace obf
