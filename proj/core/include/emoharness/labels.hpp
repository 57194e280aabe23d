#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emoharness {

/// Ordered label space of a run. Position i of every LabelSet refers to
/// labels()[i]. Names are stored case-folded.
class LabelSchema {
 public:
  LabelSchema() = default;
  /// Throws ValidationError if empty or if two names collide after case-folding.
  explicit LabelSchema(std::vector<std::string> labels);
  LabelSchema(std::initializer_list<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& operator[](std::size_t i) const { return labels_.at(i); }

  /// Case-insensitive lookup.
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// "Anger" for "anger".
  std::string display_name(std::size_t i) const;

  /// `"Anger", "Fear", "Joy"` as used in the instruction sentence of the prompts.
  std::string quoted_display_list() const;

  friend bool operator==(const LabelSchema&, const LabelSchema&) = default;

  /// The five-emotion schema used by the English track.
  static LabelSchema english();

 private:
  std::vector<std::string> labels_;
};

/// Multi-hot vector aligned to a LabelSchema. The empty set is a valid value.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::size_t width) : bits_(width, 0) {}
  /// Throws ValidationError when a value is neither 0 nor 1.
  explicit LabelSet(std::vector<std::uint8_t> bits);

  static LabelSet from_names(const LabelSchema& schema, std::initializer_list<std::string_view> names);

  std::size_t width() const noexcept { return bits_.size(); }
  bool test(std::size_t i) const { return bits_.at(i) != 0; }
  void set(std::size_t i, bool on = true) { bits_.at(i) = on ? 1 : 0; }
  std::size_t count() const noexcept;
  bool none() const noexcept { return count() == 0; }
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  /// Names of set labels in schema order.
  std::vector<std::string> names(const LabelSchema& schema) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// "Anger, Fear" in schema order, or "None" for the empty set.
std::string format_label_list(const LabelSet& labels, const LabelSchema& schema);

std::string fold_case(std::string_view s);

}  // namespace emoharness
