#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace texflow {

/// Order-preserving JSON document builder. All floating-point numbers are
/// serialized with 17 significant digits so identical runs produce
/// byte-identical reports.
class Json {
public:
    Json() : kind_(Kind::null) {}

    static Json object() { Json j; j.kind_ = Kind::object; return j; }
    static Json array() { Json j; j.kind_ = Kind::array; return j; }
    static Json str(std::string s) { Json j; j.kind_ = Kind::string; j.str_ = std::move(s); return j; }
    static Json num(double x) { Json j; j.kind_ = Kind::number; j.num_ = x; return j; }
    static Json integer(long long n) { Json j; j.kind_ = Kind::integer; j.int_ = n; return j; }
    static Json boolean(bool b) { Json j; j.kind_ = Kind::boolean; j.bool_ = b; return j; }

    Json& set(const std::string& key, Json v);
    Json& set(const std::string& key, const std::string& v) { return set(key, str(v)); }
    Json& set(const std::string& key, const char* v) { return set(key, str(v)); }
    Json& set(const std::string& key, double v) { return set(key, num(v)); }
    Json& set(const std::string& key, int v) { return set(key, integer(v)); }
    Json& set(const std::string& key, long long v) { return set(key, integer(v)); }
    Json& set(const std::string& key, std::uint64_t v) { return set(key, integer(static_cast<long long>(v))); }
    Json& set(const std::string& key, bool v) { return set(key, boolean(v)); }

    Json& push(Json v);
    Json& push(double v) { return push(num(v)); }
    Json& push(const std::string& v) { return push(str(v)); }

    std::string dump(int indent = 2) const;

private:
    enum class Kind { null, object, array, string, number, integer, boolean };
    Kind kind_;
    std::string str_;
    double num_ = 0;
    long long int_ = 0;
    bool bool_ = false;
    std::vector<std::pair<std::string, Json>> members_;
    std::vector<Json> items_;

    void write(std::string& out, int indent, int depth) const;
};

/// Write text to a file, creating parent directories. Throws on failure.
void write_text_file(const std::string& path, const std::string& content);

/// Two/three-column plot data, one row per line, 17-digit floats.
void write_plot_data(const std::string& path, const std::vector<std::vector<double>>& rows);

}  // namespace texflow
