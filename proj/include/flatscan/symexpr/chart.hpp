#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flatscan/symexpr/symbol.hpp"

namespace flatscan::symexpr {

// Ordered coordinate names plus parameter names. Coordinates are what
// fields and differentials are indexed by; parameters are constants.
class Chart {
 public:
  Chart();
  explicit Chart(std::vector<std::string> coordinates, std::vector<std::string> parameters = {});

  const std::vector<std::string>& coordinates() const;
  const std::vector<std::string>& parameters() const;
  const std::vector<SymbolId>& coordinate_ids() const;
  const std::vector<SymbolId>& parameter_ids() const;
  std::size_t dim() const { return coordinates().size(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  std::optional<std::size_t> index_of(SymbolId id) const;
  bool is_coordinate(std::string_view name) const { return index_of(name).has_value(); }
  bool is_parameter(std::string_view name) const;
  bool contains(std::string_view name) const { return is_coordinate(name) || is_parameter(name); }

  // Chart with the extra coordinates appended.
  Chart extended(const std::vector<std::string>& extra_coordinates) const;

  bool operator==(const Chart& other) const;
  bool operator!=(const Chart& other) const { return !(*this == other); }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

bool is_identifier(std::string_view name);
bool is_reserved_name(std::string_view name);

}  // namespace flatscan::symexpr
