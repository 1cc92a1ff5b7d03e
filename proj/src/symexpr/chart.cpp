#include "flatscan/symexpr/chart.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "flatscan/errors.hpp"

namespace flatscan::symexpr {

struct Chart::Data {
  std::vector<std::string> coordinates;
  std::vector<std::string> parameters;
  std::vector<SymbolId> coordinate_ids;
  std::vector<SymbolId> parameter_ids;
};

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; };
  auto alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), alnum);
}

bool is_reserved_name(std::string_view name) {
  static const std::set<std::string, std::less<>> reserved{"sin", "cos", "tan", "cot",
                                                           "exp", "ln",  "sqrt"};
  return reserved.find(name) != reserved.end();
}

Chart::Chart() : data_(std::make_shared<const Data>()) {}

Chart::Chart(std::vector<std::string> coordinates, std::vector<std::string> parameters) {
  std::set<std::string> seen;
  auto check = [&seen](const std::string& n) {
    if (!is_identifier(n)) throw ValidationError("invalid symbol name '" + n + "'");
    if (is_reserved_name(n)) throw ValidationError("symbol name '" + n + "' is reserved");
    if (!seen.insert(n).second) throw ValidationError("duplicate symbol name '" + n + "'");
  };
  for (const auto& n : coordinates) check(n);
  for (const auto& n : parameters) check(n);
  auto d = std::make_shared<Data>();
  for (const auto& n : coordinates) d->coordinate_ids.push_back(intern(n));
  for (const auto& n : parameters) d->parameter_ids.push_back(intern(n));
  d->coordinates = std::move(coordinates);
  d->parameters = std::move(parameters);
  data_ = std::move(d);
}

const std::vector<std::string>& Chart::coordinates() const { return data_->coordinates; }
const std::vector<std::string>& Chart::parameters() const { return data_->parameters; }
const std::vector<SymbolId>& Chart::coordinate_ids() const { return data_->coordinate_ids; }
const std::vector<SymbolId>& Chart::parameter_ids() const { return data_->parameter_ids; }

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
  const auto& c = data_->coordinates;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Chart::index_of(SymbolId id) const {
  const auto& c = data_->coordinate_ids;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == id) return i;
  }
  return std::nullopt;
}

bool Chart::is_parameter(std::string_view name) const {
  const auto& p = data_->parameters;
  return std::find(p.begin(), p.end(), name) != p.end();
}

Chart Chart::extended(const std::vector<std::string>& extra_coordinates) const {
  auto coords = coordinates();
  coords.insert(coords.end(), extra_coordinates.begin(), extra_coordinates.end());
  return Chart(std::move(coords), parameters());
}

bool Chart::operator==(const Chart& other) const {
  if (data_ == other.data_) return true;
  return data_->coordinates == other.data_->coordinates &&
         data_->parameters == other.data_->parameters;
}

}  // namespace flatscan::symexpr
