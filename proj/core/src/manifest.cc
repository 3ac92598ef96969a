// core/src/manifest.cc

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

#include "biasaudit/manifest.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "biasaudit/error.hpp"

namespace biasaudit {

std::vector<SpeakerRecord> load_manifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open manifest: " + path.string());
  const std::filesystem::path base = path.parent_path();

  std::vector<SpeakerRecord> records;
  std::map<std::string, size_t> index;  // speaker_id -> records slot
  std::set<std::pair<std::string, std::string>> seen_paths;

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::istringstream ls(line);
    std::string speaker, group_tok, rel_path;
    if (!std::getline(ls, speaker, '\t') || !std::getline(ls, group_tok, '\t') ||
        !std::getline(ls, rel_path)) {
      throw ManifestParseError("line " + std::to_string(line_no) +
                               ": expected speaker<TAB>group<TAB>path in " + path.string());
    }
    if (speaker.empty() || rel_path.empty())
      throw ManifestParseError("line " + std::to_string(line_no) + ": empty field in " + path.string());

    Group group;
    if (group_tok == "A") group = Group::A;
    else if (group_tok == "B") group = Group::B;
    else throw UnknownGroupError("line " + std::to_string(line_no) + ": unknown group token '" +
                                 group_tok + "' in " + path.string());

    if (!seen_paths.insert({speaker, rel_path}).second)
      throw DuplicateSpeakerError("line " + std::to_string(line_no) + ": speaker '" + speaker +
                                  "' lists '" + rel_path + "' twice in " + path.string());

    auto it = index.find(speaker);
    if (it == index.end()) {
      index.emplace(speaker, records.size());
      SpeakerRecord rec;
      rec.speaker_id = speaker;
      rec.group = group;
      rec.utterance_paths.push_back(base / rel_path);
      records.push_back(std::move(rec));
    } else {
      SpeakerRecord &rec = records[it->second];
      if (rec.group != group)
        throw DuplicateSpeakerError("line " + std::to_string(line_no) + ": speaker '" + speaker +
                                    "' appears in both groups in " + path.string());
      rec.utterance_paths.push_back(base / rel_path);
    }
  }

  if (records.empty()) throw EmptyManifestError("manifest has no records: " + path.string());

  bool have_a = false, have_b = false;
  for (const auto &r : records) (r.group == Group::A ? have_a : have_b) = true;
  if (!have_a || !have_b)
    throw ManifestParseError("manifest must contain both groups: " + path.string());

  return records;
}

}  // namespace biasaudit
