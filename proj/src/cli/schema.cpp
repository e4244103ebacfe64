#include "schema.hpp"

namespace sl2orbit::cli {

namespace {

using nlohmann::json;

std::string escape_token(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

bool has_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "number") return v.is_number();
    if (t == "integer") {
        if (v.is_number_integer()) return true;
        if (!v.is_number_float()) return false;
        const double d = v.get<double>();
        return d == static_cast<double>(static_cast<long long>(d));
    }
    return false;
}

class Validator {
public:
    explicit Validator(const json& root) : root_(root) {}

    std::optional<SchemaViolation> check(const json& v, const json& s, const std::string& path) const {
        if (s.contains("$ref")) return check(v, resolve(s["$ref"].get<std::string>()), path);

        if (s.contains("type")) {
            const json& t = s["type"];
            bool ok = false;
            if (t.is_string()) {
                ok = has_type(v, t.get<std::string>());
            } else {
                for (const auto& x : t) ok = ok || has_type(v, x.get<std::string>());
            }
            if (!ok) return SchemaViolation{path, "expected type " + t.dump() + ", got " + v.type_name()};
        }
        if (s.contains("enum")) {
            bool ok = false;
            for (const auto& e : s["enum"]) ok = ok || e == v;
            if (!ok) return SchemaViolation{path, "value " + v.dump() + " not in " + s["enum"].dump()};
        }
        if (v.is_number()) {
            const double d = v.get<double>();
            if (s.contains("minimum") && d < s["minimum"].get<double>()) {
                return SchemaViolation{path, "value below minimum " + s["minimum"].dump()};
            }
            if (s.contains("exclusiveMinimum") && d <= s["exclusiveMinimum"].get<double>()) {
                return SchemaViolation{path, "value must exceed " + s["exclusiveMinimum"].dump()};
            }
        }
        if (v.is_object()) {
            if (s.contains("required")) {
                for (const auto& r : s["required"]) {
                    const auto key = r.get<std::string>();
                    if (!v.contains(key)) {
                        return SchemaViolation{path + "/" + escape_token(key), "missing required field"};
                    }
                }
            }
            const json* props = s.contains("properties") ? &s["properties"] : nullptr;
            const bool closed = s.contains("additionalProperties") && s["additionalProperties"] == false;
            for (auto it = v.begin(); it != v.end(); ++it) {
                const std::string sub = path + "/" + escape_token(it.key());
                if (props && props->contains(it.key())) {
                    if (auto e = check(it.value(), (*props)[it.key()], sub)) return e;
                } else if (closed) {
                    return SchemaViolation{sub, "unknown field"};
                }
            }
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) {
                return SchemaViolation{path, "expected at least " + s["minItems"].dump() + " items"};
            }
            if (s.contains("maxItems") && v.size() > s["maxItems"].get<std::size_t>()) {
                return SchemaViolation{path, "expected at most " + s["maxItems"].dump() + " items"};
            }
            if (s.contains("items")) {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (auto e = check(v[i], s["items"], path + "/" + std::to_string(i))) return e;
                }
            }
        }
        return std::nullopt;
    }

private:
    const json& resolve(const std::string& ref) const {
        if (ref.rfind("#/", 0) != 0) throw std::runtime_error("unsupported schema reference " + ref);
        return root_.at(json::json_pointer(ref.substr(1)));
    }

    const json& root_;
};

}  // namespace

std::optional<SchemaViolation> validate(const json& instance, const json& schema) {
    return Validator(schema).check(instance, schema, "");
}

}  // namespace sl2orbit::cli
