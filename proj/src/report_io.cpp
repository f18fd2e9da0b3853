#include "texflow/report_io.hpp"

#include <filesystem>
#include <fstream>

#include "texflow/common.hpp"

namespace texflow {

Json& Json::set(const std::string& key, Json v) {
    if (kind_ != Kind::object) throw InvalidArgument("Json::set on non-object");
    members_.emplace_back(key, std::move(v));
    return *this;
}

Json& Json::push(Json v) {
    if (kind_ != Kind::array) throw InvalidArgument("Json::push on non-array");
    items_.push_back(std::move(v));
    return *this;
}

namespace {
void escape_to(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}
}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::string: escape_to(out, str_); break;
        case Kind::number: out += fp17(num_); break;
        case Kind::integer: out += std::to_string(int_); break;
        case Kind::boolean: out += bool_ ? "true" : "false"; break;
        case Kind::object: {
            if (members_.empty()) { out += "{}"; break; }
            out += "{\n";
            for (std::size_t i = 0; i < members_.size(); ++i) {
                out += pad;
                escape_to(out, members_[i].first);
                out += ": ";
                members_[i].second.write(out, indent, depth + 1);
                if (i + 1 < members_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "}";
            break;
        }
        case Kind::array: {
            if (items_.empty()) { out += "[]"; break; }
            out += "[\n";
            for (std::size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].write(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += close_pad + "]";
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open for writing: " + path);
    out << content;
}

void write_plot_data(const std::string& path, const std::vector<std::vector<double>>& rows) {
    std::string body;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) body += ' ';
            body += fp17(row[i]);
        }
        body += '\n';
    }
    write_text_file(path, body);
}

}  // namespace texflow
