#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace flatscan::symexpr {

class RatFunc;

using SymbolId = std::uint32_t;

// Plain symbols are coordinates and parameters. The remaining kinds are
// extension symbols standing for a unary function applied to an argument.
enum class SymbolKind { Plain, Sin, Cos, Exp, Ln, Sqrt };

struct SymbolInfo {
  std::string name;  // identifier, or printed call such as "sin(theta)"
  SymbolKind kind = SymbolKind::Plain;
  std::shared_ptr<const RatFunc> argument;  // extension symbols only
  SymbolId partner = 0;                     // sin <-> cos of the same argument
  std::vector<SymbolId> plain_dependencies;  // plain symbols the argument depends on
};

// Process-wide interning of symbol names. Ids are assigned in first-seen
// order and never reused; lookups are thread safe.
SymbolId intern(std::string_view name);

// Interns the extension symbol kind(argument). For Sin and Cos both members
// of the pair are created and the requested one is returned.
SymbolId intern_function(SymbolKind kind, const RatFunc& argument);

const SymbolInfo& symbol_info(SymbolId id);
const std::string& symbol_name(SymbolId id);
bool is_extension(SymbolId id);

// Number of symbols interned so far.
std::size_t symbol_count();

const char* function_name(SymbolKind kind);

}  // namespace flatscan::symexpr
