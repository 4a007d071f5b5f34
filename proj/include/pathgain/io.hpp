#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace pathgain {

/// Reads a JSON document; malformed input raises ParseError.
nlohmann::json read_json(const std::filesystem::path& path);
/// Same, keeping object keys in file order.
nlohmann::ordered_json read_ordered_json(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

template <class Json>
void write_json_atomic(const std::filesystem::path& path, const Json& doc) {
  write_text_atomic(path, doc.dump(2) + "\n");
}

}  // namespace pathgain
