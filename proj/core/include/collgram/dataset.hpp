#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "collgram/scoring.hpp"

namespace collgram {

struct LabeledEntry {
  std::string id;
  std::string text;
  Label label = Label::depressed;

  friend bool operator==(const LabeledEntry&, const LabeledEntry&) = default;
};

/// Unlabeled record, as consumed by `collgram profile`.
struct TextEntry {
  std::string id;
  std::string text;
};

// JSON-lines, one {"id": str, "text": str, "label": "depressed"|"healthy"}
// object per line; blank lines are skipped. Missing fields, unknown labels
// and duplicate ids throw FormatError naming the line. File order is kept.
std::vector<LabeledEntry> read_dataset(std::istream& in);
std::vector<LabeledEntry> load_dataset(const std::filesystem::path& path);

/// Same format; "label" is optional and ignored.
std::vector<TextEntry> read_text_entries(std::istream& in);
std::vector<TextEntry> load_text_entries(const std::filesystem::path& path);

/// Inverse of read_dataset.
std::string dataset_jsonl(const std::vector<LabeledEntry>& entries);

}  // namespace collgram
