#include "pgcl/state_space.hpp"

#include <set>

#include "pgcl/errors.hpp"

namespace pgcl {

std::string to_string(const Value& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return r->str();
  return std::get<Token>(v).name;
}

StateSpace::StateSpace(std::vector<VarDomain> domains) : domains_(std::move(domains)) {
  std::set<std::string> names;
  strides_.assign(domains_.size(), 1);
  for (const auto& d : domains_) {
    if (!names.insert(d.name).second) throw Error("variable '" + d.name + "' declared twice");
    if (d.values.empty()) throw Error("variable '" + d.name + "' has an empty domain");
    std::map<Value, std::size_t> pos;
    for (std::size_t i = 0; i < d.values.size(); ++i)
      if (!pos.emplace(d.values[i], i).second)
        throw Error("domain of '" + d.name + "' repeats value " + to_string(d.values[i]));
    positions_.push_back(std::move(pos));
  }
  state_count_ = 1;
  for (std::size_t k = domains_.size(); k-- > 0;) {
    strides_[k] = state_count_;
    state_count_ *= domains_[k].values.size();
  }
}

std::optional<std::size_t> StateSpace::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < domains_.size(); ++i)
    if (domains_[i].name == name) return i;
  return std::nullopt;
}

Valuation StateSpace::state(std::size_t index) const {
  Valuation v;
  v.reserve(domains_.size());
  for (std::size_t k = 0; k < domains_.size(); ++k) {
    const auto& values = domains_[k].values;
    v.push_back(values[(index / strides_[k]) % values.size()]);
  }
  return v;
}

std::optional<std::size_t> StateSpace::index(const Valuation& v) const {
  if (v.size() != domains_.size()) return std::nullopt;
  std::size_t idx = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    auto it = positions_[k].find(v[k]);
    if (it == positions_[k].end()) return std::nullopt;
    idx += it->second * strides_[k];
  }
  return idx;
}

std::string StateSpace::describe(const Valuation& v) const {
  std::string out;
  for (std::size_t k = 0; k < v.size() && k < domains_.size(); ++k) {
    if (k) out += ",";
    out += domains_[k].name + "=" + to_string(v[k]);
  }
  return out;
}

bool operator==(const StateSpace& a, const StateSpace& b) {
  if (a.domains_.size() != b.domains_.size()) return false;
  for (std::size_t k = 0; k < a.domains_.size(); ++k)
    if (a.domains_[k].name != b.domains_[k].name || a.domains_[k].values != b.domains_[k].values)
      return false;
  return true;
}

}  // namespace pgcl
