// core/include/biasaudit/manifest.hpp

// Copyright 2026  The biasaudit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef BIASAUDIT_MANIFEST_HPP_
#define BIASAUDIT_MANIFEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace biasaudit {

enum class Group { A, B };  // A = control, B = target

inline const char *group_token(Group g) { return g == Group::A ? "A" : "B"; }

struct SpeakerRecord {
  std::string speaker_id;
  Group group = Group::A;
  std::vector<std::filesystem::path> utterance_paths;  // absolute, resolved
};

// Manifest grammar: UTF-8 text, one utterance per line,
//   speaker_id<TAB>group<TAB>relative/path.wav     group in {A, B}
// lines starting with '#' are ignored. Lines of one speaker are merged into
// a single record; paths are resolved relative to the manifest's directory.
//
// Errors: FileNotFoundError, EmptyManifestError, UnknownGroupError,
// ManifestParseError, DuplicateSpeakerError (a speaker re-listed with a
// conflicting group, or the same (speaker, path) pair twice).
// Postcondition: both groups occur at least once.
std::vector<SpeakerRecord> load_manifest(const std::filesystem::path &path);

}  // namespace biasaudit

#endif  // BIASAUDIT_MANIFEST_HPP_
