#include "rlfg/decls.hpp"

namespace rlfg {

void DeclTable::declare(const std::string& name, DeclKind kind) {
  if (name.empty()) throw DeclError("empty declaration name");
  if (name == "v") throw DeclError("'v' is reserved for the rule metavariable");
  auto [it, inserted] = kinds_.emplace(name, kind);
  if (!inserted) throw DeclError("duplicate declaration of '" + name + "'");
}

void DeclTable::declare_type(const std::string& name, bool contentful) {
  declare(name, DeclKind::Type);
  contentful_[name] = contentful;
}

void DeclTable::declare_attr(const std::string& name) { declare(name, DeclKind::Attribute); }

void DeclTable::declare_category(const std::string& name) { declare(name, DeclKind::Category); }

bool DeclTable::is_type(const std::string& name) const {
  auto it = kinds_.find(name);
  return it != kinds_.end() && it->second == DeclKind::Type;
}

bool DeclTable::is_attr(const std::string& name) const {
  auto it = kinds_.find(name);
  return it != kinds_.end() && it->second == DeclKind::Attribute;
}

bool DeclTable::is_category(const std::string& name) const {
  auto it = kinds_.find(name);
  return it != kinds_.end() && it->second == DeclKind::Category;
}

bool DeclTable::is_declared(const std::string& name) const { return kinds_.count(name) != 0; }

std::optional<TypeDecl> DeclTable::type_decl(const std::string& name) const {
  if (!is_type(name)) return std::nullopt;
  return TypeDecl{name, contentful_.at(name)};
}

bool DeclTable::has_goal_type() const {
  auto d = type_decl("t");
  return d && d->contentful;
}

std::vector<TypeDecl> DeclTable::types() const {
  std::vector<TypeDecl> out;
  for (const auto& [name, kind] : kinds_)
    if (kind == DeclKind::Type) out.push_back(TypeDecl{name, contentful_.at(name)});
  return out;
}

DeclTable make_decls(const std::vector<std::string>& contentful_types,
                     const std::vector<std::string>& vacuous_types,
                     const std::vector<std::string>& attrs) {
  DeclTable t;
  for (const auto& n : contentful_types) t.declare_type(n, true);
  for (const auto& n : vacuous_types) t.declare_type(n, false);
  for (const auto& n : attrs) t.declare_attr(n);
  return t;
}

}  // namespace rlfg
