#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "wno/superpoly.hpp"

namespace wno {

/// Registry of formal nonlocal variables r with r_x = density.
///
/// Append-only. Lookups take a shared lock and registration an exclusive one,
/// so a table may be read from several threads while one thread registers.
/// Entries are never moved once created.
class NonlocalVarTable {
 public:
  struct Entry {
    SuperPoly density;
    int level = 1;   // 1 + deepest nonlocal referenced by the density
    int degree = 1;  // odd degree of the density
    std::string name;
    std::string note;
  };

  NonlocalVarTable();
  NonlocalVarTable(NonlocalVarTable&&) noexcept;
  NonlocalVarTable& operator=(NonlocalVarTable&&) noexcept;
  ~NonlocalVarTable();

  /// Returns the id of an existing variable with the identical normalized
  /// density, otherwise registers a new one named `<prefix><k>`.
  int register_density(const SuperPoly& density, const std::string& prefix = "r",
                       const std::string& note = {});

  std::optional<int> find(const SuperPoly& density) const;
  /// Finds an id and a rational c != 0 with density == c * density(id).
  std::optional<std::pair<int, Rational>> find_scaled(const SuperPoly& density) const;

  const Entry& entry(int id) const;
  const SuperPoly& density(int id) const { return entry(id).density; }
  OddFactor factor(int id) const;
  SuperPoly variable(int id) const { return SuperPoly::generator(factor(id)); }
  int size() const;
  /// Deepest nesting level among the nonlocals of `a` (0 for local input).
  int level_of(const SuperPoly& a) const;

  Naming naming(std::vector<std::string> fields) const;

 private:
  std::deque<Entry> entries_;
  std::map<std::string, int> counters_;
  std::unique_ptr<std::shared_mutex> mutex_;
};

}  // namespace wno
