#include "pathgain/io.hpp"

#include <fstream>
#include <sstream>

#include "pathgain/error.hpp"

namespace pathgain {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

nlohmann::ordered_json read_ordered_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::ParseError, "cannot open " + path.string());
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out << text;
    if (!out) raise(ErrorKind::InvalidArgument, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace pathgain
