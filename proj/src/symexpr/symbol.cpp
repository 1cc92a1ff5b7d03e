#include "flatscan/symexpr/symbol.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "flatscan/errors.hpp"
#include "flatscan/symexpr/ratfunc.hpp"

namespace flatscan::symexpr {
namespace {

struct Registry {
  std::shared_mutex mutex;
  std::deque<SymbolInfo> infos;  // deque: references stay valid on growth
  std::unordered_map<std::string, SymbolId> by_name;
};

Registry& registry() {
  static Registry instance;
  return instance;
}

std::vector<SymbolId> plain_dependencies_of(const RatFunc& arg) {
  std::vector<SymbolId> out;
  for (SymbolId v : arg.variables()) {
    const SymbolInfo& info = symbol_info(v);
    if (info.kind == SymbolKind::Plain) {
      out.push_back(v);
    } else {
      out.insert(out.end(), info.plain_dependencies.begin(), info.plain_dependencies.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

const char* function_name(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Sin: return "sin";
    case SymbolKind::Cos: return "cos";
    case SymbolKind::Exp: return "exp";
    case SymbolKind::Ln: return "ln";
    case SymbolKind::Sqrt: return "sqrt";
    case SymbolKind::Plain: break;
  }
  return "";
}

SymbolId intern(std::string_view name) {
  Registry& r = registry();
  const std::string key(name);
  {
    std::shared_lock lock(r.mutex);
    if (auto it = r.by_name.find(key); it != r.by_name.end()) return it->second;
  }
  std::unique_lock lock(r.mutex);
  if (auto it = r.by_name.find(key); it != r.by_name.end()) return it->second;
  const auto id = static_cast<SymbolId>(r.infos.size());
  r.infos.push_back(SymbolInfo{key, SymbolKind::Plain, nullptr, id, {}});
  r.by_name.emplace(key, id);
  return id;
}

SymbolId intern_function(SymbolKind kind, const RatFunc& argument) {
  if (kind == SymbolKind::Plain) throw Error("intern_function: plain kind");
  const std::string arg_text = argument.to_string();
  const std::string key = std::string(function_name(kind)) + "(" + arg_text + ")";
  Registry& r = registry();
  {
    std::shared_lock lock(r.mutex);
    if (auto it = r.by_name.find(key); it != r.by_name.end()) return it->second;
  }
  // Dependencies are computed before taking the exclusive lock because they
  // read other registry entries.
  auto deps = plain_dependencies_of(argument);
  auto arg_ptr = std::make_shared<const RatFunc>(argument);
  std::unique_lock lock(r.mutex);
  if (auto it = r.by_name.find(key); it != r.by_name.end()) return it->second;
  if (kind == SymbolKind::Sin || kind == SymbolKind::Cos) {
    const auto sin_id = static_cast<SymbolId>(r.infos.size());
    const auto cos_id = sin_id + 1;
    const std::string sin_key = "sin(" + arg_text + ")";
    const std::string cos_key = "cos(" + arg_text + ")";
    r.infos.push_back(SymbolInfo{sin_key, SymbolKind::Sin, arg_ptr, cos_id, deps});
    r.infos.push_back(SymbolInfo{cos_key, SymbolKind::Cos, arg_ptr, sin_id, deps});
    r.by_name.emplace(sin_key, sin_id);
    r.by_name.emplace(cos_key, cos_id);
    return kind == SymbolKind::Sin ? sin_id : cos_id;
  }
  const auto id = static_cast<SymbolId>(r.infos.size());
  r.infos.push_back(SymbolInfo{key, kind, arg_ptr, id, deps});
  r.by_name.emplace(key, id);
  return id;
}

const SymbolInfo& symbol_info(SymbolId id) {
  Registry& r = registry();
  std::shared_lock lock(r.mutex);
  return r.infos.at(id);
}

const std::string& symbol_name(SymbolId id) { return symbol_info(id).name; }

bool is_extension(SymbolId id) { return symbol_info(id).kind != SymbolKind::Plain; }

std::size_t symbol_count() {
  Registry& r = registry();
  std::shared_lock lock(r.mutex);
  return r.infos.size();
}

}  // namespace flatscan::symexpr
