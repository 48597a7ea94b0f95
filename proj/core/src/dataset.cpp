#include "collgram/dataset.hpp"

#include <istream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "collgram/errors.hpp"
#include "io_util.hpp"

namespace collgram {

namespace {

using nlohmann::json;

template <typename OnRecord>
void read_records(std::istream& in, OnRecord on_record) {
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    const json record = json::parse(line, nullptr, false);
    if (record.is_discarded()) throw FormatError("invalid JSON", lineno);
    if (!record.is_object()) throw FormatError("record must be a JSON object", lineno);

    auto string_field = [&](const char* name) -> std::string {
      const auto it = record.find(name);
      if (it == record.end()) throw FormatError(std::string("missing field \"") + name + "\"", lineno);
      if (!it->is_string()) throw FormatError(std::string("field \"") + name + "\" must be a string", lineno);
      return it->get<std::string>();
    };

    std::string id = string_field("id");
    if (!ids.insert(id).second) throw FormatError("duplicate id \"" + id + "\"", lineno);
    on_record(record, std::move(id), string_field("text"), string_field, lineno);
  }
}

}  // namespace

std::vector<LabeledEntry> read_dataset(std::istream& in) {
  std::vector<LabeledEntry> out;
  read_records(in, [&](const json&, std::string id, std::string text, auto& string_field,
                       std::size_t lineno) {
    const std::string label_text = string_field("label");
    const auto label = parse_label(label_text);
    if (!label) throw FormatError("unknown label \"" + label_text + "\"", lineno);
    out.push_back({std::move(id), std::move(text), *label});
  });
  return out;
}

std::vector<LabeledEntry> load_dataset(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  return read_dataset(in);
}

std::vector<TextEntry> read_text_entries(std::istream& in) {
  std::vector<TextEntry> out;
  read_records(in, [&](const json&, std::string id, std::string text, auto&, std::size_t) {
    out.push_back({std::move(id), std::move(text)});
  });
  return out;
}

std::vector<TextEntry> load_text_entries(const std::filesystem::path& path) {
  std::istringstream in(io::read_file(path));
  return read_text_entries(in);
}

std::string dataset_jsonl(const std::vector<LabeledEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    const json record = {{"id", e.id}, {"text", e.text}, {"label", std::string(to_string(e.label))}};
    out += record.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace collgram
