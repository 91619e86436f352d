#pragma once

// Published values of z_a(m,n) for a = 2, 3, 4, loaded from a plain-text
// fixture file (see data/reference_tables.txt).

#include "kyoto/core.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

namespace kyoto {

struct ReferenceEntry {
  int value = 0;
  bool exact = false;
  bool corrected = false;  // replaces an older published value
};

class ReferenceTable {
public:
  /// Lines "a m n value exact|upper [# comment]"; blank and '#' lines ignored.
  static ReferenceTable parse(std::istream& in) {
    ReferenceTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string comment;
      if (const auto hash = line.find('#'); hash != std::string::npos) {
        comment = line.substr(hash);
        line.erase(hash);
      }
      std::istringstream ls(line);
      int a, m, n, value;
      std::string status;
      if (!(ls >> a)) {
        if (!comment.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
          continue;
      }
      if (!(ls >> m >> n >> value >> status) || (status != "exact" && status != "upper"))
        throw InputError("reference table line " + std::to_string(lineno) + " is malformed");
      std::string extra;
      if (ls >> extra)
        throw InputError("reference table line " + std::to_string(lineno) + " has trailing fields");
      ReferenceEntry e{value, status == "exact", comment.find("corrected") != std::string::npos};
      t.insert(a, m, n, e);
    }
    return t;
  }

  static ReferenceTable load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
      throw InputError("cannot open reference table " + path.string());
    return parse(in);
  }

  /// KYOTO_DATA_DIR from the environment, else the build-time data directory.
  static std::filesystem::path default_path() {
    if (const char* env = std::getenv("KYOTO_DATA_DIR"))
      return std::filesystem::path(env) / "reference_tables.txt";
#ifdef KYOTO_DATA_DIR
    return std::filesystem::path(KYOTO_DATA_DIR) / "reference_tables.txt";
#else
    return "data/reference_tables.txt";
#endif
  }

  /// Stores both orientations; a conflicting duplicate is an error.
  void insert(int a, int m, int n, const ReferenceEntry& e) {
    for (auto key : {std::tuple{a, m, n}, std::tuple{a, n, m}}) {
      auto [it, fresh] = entries_.try_emplace(key, e);
      if (!fresh && (it->second.value != e.value || it->second.exact != e.exact))
        throw InputError("conflicting reference entries for a=" + std::to_string(a) + " " + std::to_string(m) +
                         "x" + std::to_string(n));
    }
  }

  [[nodiscard]] std::optional<ReferenceEntry> lookup(int a, int m, int n) const {
    const auto it = entries_.find({a, m, n});
    if (it == entries_.end())
      return std::nullopt;
    return it->second;
  }

  [[nodiscard]] std::optional<ReferenceEntry> lookup(const ProblemParams& p) const {
    if (p.a != p.b)
      return std::nullopt;
    return lookup(p.a, p.m, p.n);
  }

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] const auto& entries() const noexcept { return entries_; }

private:
  std::map<std::tuple<int, int, int>, ReferenceEntry> entries_;
};

}  // namespace kyoto
