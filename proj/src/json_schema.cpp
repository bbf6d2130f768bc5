#include "atlas/json_schema.hpp"

#include <regex>

namespace atlas {
namespace {

using nlohmann::json;

bool has_type(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  return false;
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  void check(const json& value, const json& schema, const std::string& path) {
    if (schema.is_boolean()) {
      if (!schema.get<bool>()) fail(path, "no value is allowed here");
      return;
    }
    if (auto ref = schema.find("$ref"); ref != schema.end()) {
      check(value, resolve(ref->get<std::string>()), path);
      return;
    }
    if (auto type = schema.find("type"); type != schema.end()) {
      bool ok = false;
      if (type->is_array()) {
        for (const auto& t : *type) ok = ok || has_type(value, t.get<std::string>());
      } else {
        ok = has_type(value, type->get<std::string>());
      }
      if (!ok) {
        fail(path, "expected type " + type->dump() + ", found " + value.type_name());
        return;
      }
    }
    if (auto e = schema.find("enum"); e != schema.end()) {
      if (std::find(e->begin(), e->end(), value) == e->end()) fail(path, "value not in enum " + e->dump());
    }
    if (auto c = schema.find("const"); c != schema.end() && value != *c) {
      fail(path, "expected constant " + c->dump());
    }
    if (value.is_number()) {
      const double x = value.get<double>();
      if (auto m = schema.find("minimum"); m != schema.end() && x < m->get<double>()) {
        fail(path, "below minimum " + m->dump());
      }
      if (auto m = schema.find("maximum"); m != schema.end() && x > m->get<double>()) {
        fail(path, "above maximum " + m->dump());
      }
    }
    if (value.is_string()) {
      if (auto m = schema.find("minLength"); m != schema.end() &&
                                             value.get<std::string>().size() < m->get<std::size_t>()) {
        fail(path, "shorter than minLength " + m->dump());
      }
      if (auto p = schema.find("pattern"); p != schema.end() &&
                                            !std::regex_search(value.get<std::string>(), std::regex(p->get<std::string>()))) {
        fail(path, "does not match pattern " + p->dump());
      }
    }
    if (value.is_array()) check_array(value, schema, path);
    if (value.is_object()) check_object(value, schema, path);
  }

  std::vector<std::string> errors;

 private:
  void fail(const std::string& path, const std::string& message) {
    errors.push_back((path.empty() ? "/" : path) + ": " + message);
  }

  const json& resolve(const std::string& ref) {
    if (!ref.starts_with("#/")) throw std::runtime_error("unsupported $ref " + ref);
    return root_.at(json::json_pointer(ref.substr(1)));
  }

  void check_array(const json& value, const json& schema, const std::string& path) {
    if (auto m = schema.find("minItems"); m != schema.end() && value.size() < m->get<std::size_t>()) {
      fail(path, "fewer than " + m->dump() + " items");
    }
    if (auto m = schema.find("maxItems"); m != schema.end() && value.size() > m->get<std::size_t>()) {
      fail(path, "more than " + m->dump() + " items");
    }
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < value.size(); ++i) check(value[i], *items, path + "/" + std::to_string(i));
    }
  }

  void check_object(const json& value, const json& schema, const std::string& path) {
    if (auto req = schema.find("required"); req != schema.end()) {
      for (const auto& name : *req) {
        if (!value.contains(name.get<std::string>())) fail(path, "missing required key '" + name.get<std::string>() + "'");
      }
    }
    const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
    const json* patterns = schema.contains("patternProperties") ? &schema["patternProperties"] : nullptr;
    const json* additional = schema.contains("additionalProperties") ? &schema["additionalProperties"] : nullptr;
    for (const auto& [key, child] : value.items()) {
      const std::string child_path = path + "/" + key;
      bool matched = false;
      if (props && props->contains(key)) {
        check(child, (*props)[key], child_path);
        matched = true;
      }
      if (patterns) {
        for (const auto& [pattern, sub] : patterns->items()) {
          if (std::regex_search(key, std::regex(pattern))) {
            check(child, sub, child_path);
            matched = true;
          }
        }
      }
      if (!matched && additional) check(child, *additional, child_path);
    }
  }

  const json& root_;
};

}  // namespace

std::vector<std::string> validate_json_schema(const json& instance, const json& schema) {
  Validator v(schema);
  v.check(instance, schema, "");
  return std::move(v.errors);
}

}  // namespace atlas
