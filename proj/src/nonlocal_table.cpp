#include "wno/nonlocal_table.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace wno {

NonlocalVarTable::NonlocalVarTable() : mutex_(std::make_unique<std::shared_mutex>()) {}
NonlocalVarTable::NonlocalVarTable(NonlocalVarTable&&) noexcept = default;
NonlocalVarTable& NonlocalVarTable::operator=(NonlocalVarTable&&) noexcept = default;
NonlocalVarTable::~NonlocalVarTable() = default;

int NonlocalVarTable::register_density(const SuperPoly& density, const std::string& prefix,
                                       const std::string& note) {
  if (density.is_zero()) throw std::invalid_argument("nonlocal density is zero");
  if (!density.homogeneous()) throw std::invalid_argument("nonlocal density is not homogeneous");
  if (density.degree() < 1)
    throw std::invalid_argument("nonlocal density must contain odd variables (degree >= 1)");

  std::unique_lock lock(*mutex_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].density == density) return static_cast<int>(i);

  int level = 1;
  for (int id : density.nonlocal_ids()) {
    if (id < 0 || static_cast<std::size_t>(id) >= entries_.size())
      throw std::out_of_range("density references an unregistered nonlocal variable");
    level = std::max(level, entries_[id].level + 1);
  }
  int k = ++counters_[prefix];
  entries_.push_back({density, level, density.degree(), prefix + std::to_string(k), note});
  return static_cast<int>(entries_.size() - 1);
}

std::optional<int> NonlocalVarTable::find(const SuperPoly& density) const {
  std::shared_lock lock(*mutex_);
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].density == density) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<std::pair<int, Rational>> NonlocalVarTable::find_scaled(const SuperPoly& density) const {
  if (density.is_zero()) return std::nullopt;
  std::shared_lock lock(*mutex_);
  const auto& [word, coeff] = *density.terms().begin();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const SuperPoly& d = entries_[i].density;
    if (d.size() != density.size()) continue;
    auto it = d.terms().find(word);
    if (it == d.terms().end()) continue;
    RationalExpr ratio = coeff / it->second;
    if (!ratio.is_constant()) continue;
    if (d * ratio == density) return std::make_pair(static_cast<int>(i), ratio.constant_value());
  }
  return std::nullopt;
}

const NonlocalVarTable::Entry& NonlocalVarTable::entry(int id) const {
  std::shared_lock lock(*mutex_);
  if (id < 0 || static_cast<std::size_t>(id) >= entries_.size())
    throw std::out_of_range("unregistered nonlocal variable id " + std::to_string(id));
  return entries_[id];
}

OddFactor NonlocalVarTable::factor(int id) const { return OddFactor::nonlocal(id, entry(id).degree); }

int NonlocalVarTable::size() const {
  std::shared_lock lock(*mutex_);
  return static_cast<int>(entries_.size());
}

int NonlocalVarTable::level_of(const SuperPoly& a) const {
  int level = 0;
  for (int id : a.nonlocal_ids()) level = std::max(level, entry(id).level);
  return level;
}

Naming NonlocalVarTable::naming(std::vector<std::string> fields) const {
  Naming n;
  n.fields = std::move(fields);
  std::shared_lock lock(*mutex_);
  for (const auto& e : entries_) n.nonlocals.push_back(e.name);
  return n;
}

}  // namespace wno
