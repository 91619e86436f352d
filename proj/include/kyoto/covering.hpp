#pragma once

// Packings of (a+1)-subsets given by a permutation group and base blocks,
// written in the alphanumeric point notation 0-9 then A-Z.

#include "kyoto/bounds.hpp"
#include "kyoto/codec.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace kyoto {

using Permutation = std::vector<int>;
using Block = std::vector<int>;

struct CoveringRecord {
  int a = 0;
  int b = 0;
  int m = 0;
  std::int64_t value = 0;
  std::vector<Permutation> permutations;
  std::vector<Block> base_blocks;  // repeated blocks are significant
};

struct CoveringCheck {
  bool ok = false;
  std::int64_t blocks = 0;        // size of the generated collection
  int max_multiplicity = 0;       // worst coverage of any a-subset
  std::size_t group_order = 0;
};

namespace detail {

inline int point_value(char c) {
  if (c >= '0' && c <= '9')
    return c - '0';
  const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u >= 'A' && u <= 'Z')
    return u - 'A' + 10;
  return -1;
}

inline char point_char(int v) { return static_cast<char>(v < 10 ? '0' + v : 'A' + v - 10); }

}  // namespace detail

/// Parses a cycle-notation word such as "(013)(254)" on points {0..m-1}.
inline Permutation parse_permutation(std::string_view word, int m) {
  Permutation perm(m);
  for (int i = 0; i < m; ++i)
    perm[i] = i;
  std::vector<bool> seen(m, false);
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError(ParseErrorKind::header, "bad permutation \"" + std::string(word) + "\": " + why);
  };
  while (i < word.size()) {
    if (word[i] == ' ') {
      ++i;
      continue;
    }
    if (word[i] != '(')
      fail("expected '('");
    std::vector<int> cycle;
    for (++i; i < word.size() && word[i] != ')'; ++i) {
      const int v = detail::point_value(word[i]);
      if (v < 0 || v >= m)
        fail("point out of range");
      if (seen[v])
        fail("point repeated");
      seen[v] = true;
      cycle.push_back(v);
    }
    if (i == word.size())
      fail("unterminated cycle");
    ++i;
    if (cycle.empty())
      fail("empty cycle");
    for (std::size_t k = 0; k < cycle.size(); ++k)
      perm[cycle[k]] = cycle[(k + 1) % cycle.size()];
  }
  return perm;
}

inline Block parse_block(std::string_view word, int m) {
  Block blk;
  for (char c : word) {
    const int v = detail::point_value(c);
    if (v < 0 || v >= m)
      throw ParseError(ParseErrorKind::header, "bad block \"" + std::string(word) + "\"");
    blk.push_back(v);
  }
  std::sort(blk.begin(), blk.end());
  if (std::adjacent_find(blk.begin(), blk.end()) != blk.end())
    throw ParseError(ParseErrorKind::header, "repeated point in block \"" + std::string(word) + "\"");
  return blk;
}

inline std::string format_block(const Block& blk) {
  std::string s;
  for (int v : blk)
    s += detail::point_char(v);
  return s;
}

/// Closure of the generators under composition, identity included.
inline std::vector<Permutation> generate_group(const std::vector<Permutation>& gens, int m,
                                               std::size_t max_order = 1'000'000) {
  Permutation id(m);
  for (int i = 0; i < m; ++i)
    id[i] = i;
  std::set<Permutation> seen{id};
  std::vector<Permutation> order{id};
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (const auto& g : gens) {
      Permutation next(m);
      for (int i = 0; i < m; ++i)
        next[i] = g[order[k][i]];
      if (seen.insert(next).second) {
        order.push_back(std::move(next));
        if (order.size() > max_order)
          throw BudgetError("permutation group exceeds order budget");
      }
    }
  }
  return order;
}

/// Expands every base block into its orbit under the generated group and
/// checks size and coverage multiplicity.
inline CoveringCheck check_covering(const CoveringRecord& rec) {
  for (const auto& g : rec.permutations)
    if (static_cast<int>(g.size()) != rec.m)
      throw InputError("permutation acts on the wrong number of points");
  const auto group = generate_group(rec.permutations, rec.m);

  std::vector<Block> blocks;
  for (const auto& base : rec.base_blocks) {
    if (static_cast<int>(base.size()) != rec.a + 1)
      throw InputError("base block " + format_block(base) + " does not have a+1 points");
    std::set<Block> orbit;
    for (const auto& g : group) {
      Block img;
      for (int v : base)
        img.push_back(g[v]);
      std::sort(img.begin(), img.end());
      orbit.insert(std::move(img));
    }
    blocks.insert(blocks.end(), orbit.begin(), orbit.end());
  }

  std::map<Block, int> cover;
  int worst = 0;
  for (const auto& blk : blocks)
    for_each_subset(rec.a + 1, rec.a, [&](std::span<const int> pick) {
      Block sub;
      for (int k : pick)
        sub.push_back(blk[k]);
      worst = std::max(worst, ++cover[sub]);
      return false;
    });

  CoveringCheck out;
  out.blocks = static_cast<std::int64_t>(blocks.size());
  out.max_multiplicity = worst;
  out.group_order = group.size();
  out.ok = out.blocks == rec.value && worst <= rec.b - 1;
  return out;
}

inline bool verify_covering(const CoveringRecord& rec) { return check_covering(rec).ok; }

/// Reads records of the form
///   a b m value | (perm) (perm), (perm) | block block ...
/// Permutation words are separated by commas; '#' starts a comment.
inline std::vector<CoveringRecord> parse_covering_table(std::istream& in) {
  std::vector<CoveringRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos)
      line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto bar1 = line.find('|');
    const auto bar2 = bar1 == std::string::npos ? bar1 : line.find('|', bar1 + 1);
    if (bar2 == std::string::npos)
      throw ParseError(ParseErrorKind::header, "covering line needs two '|' separators: " + line);
    CoveringRecord rec;
    std::istringstream head(line.substr(0, bar1));
    if (!(head >> rec.a >> rec.b >> rec.m >> rec.value))
      throw ParseError(ParseErrorKind::header, "bad covering header: " + line);
    std::string perms = line.substr(bar1 + 1, bar2 - bar1 - 1);
    std::istringstream ps(perms);
    for (std::string word; std::getline(ps, word, ',');)
      if (word.find('(') != std::string::npos)
        rec.permutations.push_back(parse_permutation(word, rec.m));
    std::istringstream bs(line.substr(bar2 + 1));
    for (std::string word; bs >> word;)
      rec.base_blocks.push_back(parse_block(word, rec.m));
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace kyoto
