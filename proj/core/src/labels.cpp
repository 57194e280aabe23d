#include "emoharness/labels.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "emoharness/errors.hpp"

namespace emoharness {

std::string fold_case(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

LabelSchema::LabelSchema(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("label schema must not be empty");
  std::unordered_set<std::string> seen;
  for (auto& label : labels_) {
    label = fold_case(label);
    if (label.empty()) throw ValidationError("label schema contains an empty label name");
    if (!seen.insert(label).second) throw ValidationError("duplicate label in schema: " + label);
  }
}

LabelSchema::LabelSchema(std::initializer_list<std::string> labels) : LabelSchema(std::vector<std::string>(labels)) {}

std::optional<std::size_t> LabelSchema::index_of(std::string_view name) const {
  const std::string folded = fold_case(name);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == folded) return i;
  }
  return std::nullopt;
}

std::string LabelSchema::display_name(std::size_t i) const {
  std::string name = labels_.at(i);
  if (!name.empty()) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name;
}

std::string LabelSchema::quoted_display_list() const {
  std::string out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (i) out += ", ";
    out += '"' + display_name(i) + '"';
  }
  return out;
}

LabelSchema LabelSchema::english() { return LabelSchema{"anger", "fear", "joy", "sadness", "surprise"}; }

LabelSet::LabelSet(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw ValidationError("label vector entries must be 0 or 1");
  }
}

LabelSet LabelSet::from_names(const LabelSchema& schema, std::initializer_list<std::string_view> names) {
  LabelSet set(schema.size());
  for (auto name : names) {
    auto idx = schema.index_of(name);
    if (!idx) throw ValidationError("label not in schema: " + std::string(name));
    set.set(*idx);
  }
  return set;
}

std::size_t LabelSet::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::string> LabelSet::names(const LabelSchema& schema) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < bits_.size() && i < schema.size(); ++i) {
    if (bits_[i]) out.push_back(schema[i]);
  }
  return out;
}

std::string format_label_list(const LabelSet& labels, const LabelSchema& schema) {
  if (labels.width() != schema.size()) throw ValidationError("label set width does not match schema");
  std::string out;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (!labels.test(i)) continue;
    if (!out.empty()) out += ", ";
    out += schema.display_name(i);
  }
  return out.empty() ? "None" : out;
}

}  // namespace emoharness
