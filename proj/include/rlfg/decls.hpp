#ifndef RLFG_DECLS_HPP_
#define RLFG_DECLS_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlfg {

// An atomic resource type. Contentful types (e, t) carry semantic weight;
// vacuous ones (NOM, ACC, SG, PL, ...) are checked but never interpreted.
// The flag has no effect on reduction.
struct TypeDecl {
  std::string name;
  bool contentful = false;
};

enum class DeclKind { Type, Attribute, Category };

class DeclError : public std::runtime_error {
public:
  explicit DeclError(const std::string& msg) : std::runtime_error(msg) {}
};

// Single namespace for types, attributes and categories. Names are unique
// across kinds so that f-term parsing never has to guess whether an
// identifier is an atom or an attribute. "v" is reserved for the rule
// metavariable and cannot be declared.
class DeclTable {
public:
  void declare_type(const std::string& name, bool contentful);
  void declare_attr(const std::string& name);
  void declare_category(const std::string& name);

  bool is_type(const std::string& name) const;
  bool is_attr(const std::string& name) const;
  bool is_category(const std::string& name) const;
  bool is_declared(const std::string& name) const;

  std::optional<TypeDecl> type_decl(const std::string& name) const;

  // The sentence goal type is the contentful type named "t".
  bool has_goal_type() const;
  std::vector<TypeDecl> types() const;

private:
  void declare(const std::string& name, DeclKind kind);

  std::map<std::string, DeclKind> kinds_;
  std::map<std::string, bool> contentful_;
};

// Convenience for tests and tools: declare several names at once.
DeclTable make_decls(const std::vector<std::string>& contentful_types,
                     const std::vector<std::string>& vacuous_types,
                     const std::vector<std::string>& attrs);

}  // namespace rlfg

#endif  // RLFG_DECLS_HPP_
