#include "wno/superpoly.hpp"

#include <algorithm>

namespace wno {

int word_degree(const OddWord& w) {
  int d = 0;
  for (const auto& f : w) d += f.degree;
  return d;
}

bool word_odd(const OddWord& w) { return word_degree(w) % 2 != 0; }

int canonicalize(OddWord& w) {
  int sign = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    for (std::size_t j = i; j > 0 && w[j] < w[j - 1]; --j) {
      if (w[j].odd() && w[j - 1].odd()) sign = -sign;
      std::swap(w[j], w[j - 1]);
    }
  }
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == w[i - 1] && w[i].odd()) return 0;
  return sign;
}

SuperPoly::SuperPoly(const RationalExpr& c) {
  if (!c.is_zero()) terms_.emplace(OddWord{}, c);
}

SuperPoly SuperPoly::normalize(const std::vector<RawTerm>& raw) {
  SuperPoly out;
  for (const auto& t : raw) {
    OddWord w = t.factors;
    int s = canonicalize(w);
    if (s == 0) continue;
    out.add_term(w, s > 0 ? t.coefficient : -t.coefficient);
  }
  return out;
}

SuperPoly SuperPoly::generator(const OddFactor& f) {
  SuperPoly out;
  out.terms_.emplace(OddWord{f}, RationalExpr(1));
  return out;
}

SuperPoly SuperPoly::term(const RationalExpr& c, OddWord w) {
  int s = canonicalize(w);
  SuperPoly out;
  if (s != 0) out.add_term(w, s > 0 ? c : -c);
  return out;
}

void SuperPoly::add_term(const OddWord& w, const RationalExpr& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

SuperPoly& SuperPoly::operator+=(const SuperPoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

SuperPoly& SuperPoly::operator-=(const SuperPoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

SuperPoly& SuperPoly::operator*=(const RationalExpr& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= c;
  return *this;
}

SuperPoly operator*(const SuperPoly& a, const SuperPoly& b) {
  SuperPoly out;
  OddWord w;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) {
      w.assign(wa.begin(), wa.end());
      w.insert(w.end(), wb.begin(), wb.end());
      int s = canonicalize(w);
      if (s == 0) continue;
      RationalExpr c = ca * cb;
      out.add_term(w, s > 0 ? c : -c);
    }
  }
  return out;
}

SuperPoly SuperPoly::operator-() const {
  SuperPoly out = *this;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

SuperPoly SuperPoly::partial(JetVar v) const {
  SuperPoly out;
  for (const auto& [w, c] : terms_) out.add_term(w, c.partial(v));
  return out;
}

SuperPoly SuperPoly::partial(const OddFactor& f) const {
  if (f.is_nonlocal())
    throw NonlocalError("partial derivative by a nonlocal variable: use nonlocal EL rules");
  SuperPoly out;
  for (const auto& [w, c] : terms_) {
    auto it = std::find(w.begin(), w.end(), f);
    if (it == w.end()) continue;
    int before = 0;
    for (auto jt = w.begin(); jt != it; ++jt) before += jt->degree;
    OddWord rest(w.begin(), it);
    rest.insert(rest.end(), it + 1, w.end());
    out.add_term(rest, before % 2 == 0 ? c : -c);
  }
  return out;
}

int SuperPoly::degree() const {
  if (terms_.empty()) return -1;
  return word_degree(terms_.begin()->first);
}

bool SuperPoly::homogeneous() const {
  int d = degree();
  for (const auto& [w, c] : terms_)
    if (word_degree(w) != d) return false;
  return true;
}

std::map<int, SuperPoly> SuperPoly::by_degree() const {
  std::map<int, SuperPoly> out;
  for (const auto& [w, c] : terms_) out[word_degree(w)].terms_.emplace(w, c);
  return out;
}

bool SuperPoly::is_local() const {
  for (const auto& [w, c] : terms_)
    for (const auto& f : w)
      if (f.is_nonlocal()) return false;
  return true;
}

std::set<int> SuperPoly::nonlocal_ids() const {
  std::set<int> ids;
  for (const auto& [w, c] : terms_)
    for (const auto& f : w)
      if (f.is_nonlocal()) ids.insert(f.index);
  return ids;
}

int SuperPoly::max_even_order(int field) const {
  int best = -1;
  for (const auto& [w, c] : terms_) best = std::max(best, c.max_order(field));
  return best;
}

int SuperPoly::max_odd_order(int field) const {
  int best = -1;
  for (const auto& [w, c] : terms_)
    for (const auto& f : w)
      if (f.is_jet() && f.index == field) best = std::max(best, f.order);
  return best;
}

int SuperPoly::max_field() const {
  int best = -1;
  for (const auto& [w, c] : terms_) {
    for (const auto& f : w)
      if (f.is_jet()) best = std::max(best, f.index);
    for (const auto& v : c.variables()) best = std::max(best, v.field);
  }
  return best;
}

std::string word_to_string(const OddWord& w, const Naming& names) {
  std::string s;
  for (const auto& f : w) {
    if (!s.empty()) s += "*";
    s += f.is_jet() ? names.odd(f.index, f.order) : names.nonlocal(f.index);
  }
  return s;
}

std::string SuperPoly::to_string(const Naming& names) const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [w, c] : terms_) {
    std::string term;
    if (w.empty()) {
      term = c.to_string(names);
      if (c.numerator().size() > 1 && terms_.size() > 1) term = "(" + term + ")";
    } else {
      std::string word = word_to_string(w, names);
      if (c.is_constant()) {
        Rational q = c.constant_value();
        if (q == 1) term = word;
        else if (q == -1) term = "-" + word;
        else term = wno::to_string(q) + "*" + word;
      } else {
        std::string cs = c.to_string(names);
        bool simple = c.is_polynomial() && c.numerator().size() == 1;
        term = (simple ? cs : "(" + cs + ")") + "*" + word;
      }
    }
    if (s.empty()) {
      s = term;
    } else if (term.front() == '-') {
      s += " - " + term.substr(1);
    } else {
      s += " + " + term;
    }
  }
  return s;
}

}  // namespace wno
