#include "torun/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace torun {

JsonWriter& JsonWriter::begin_object() {
    separate();
    out_ += '{';
    counts_.push_back(0);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    counts_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separate();
    out_ += '[';
    counts_.push_back(0);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    counts_.pop_back();
    return *this;
}

void JsonWriter::separate() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!counts_.empty() && counts_.back()++ > 0) out_ += ',';
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
    out += '"';
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
}

} // namespace

JsonWriter& JsonWriter::key(std::string_view k) {
    if (!counts_.empty() && counts_.back()++ > 0) out_ += ',';
    append_escaped(out_, k);
    out_ += ':';
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separate();
    out_ += std::isfinite(v) ? format_double(v) : "null";
    return *this;
}

JsonWriter& JsonWriter::value(int v) {
    separate();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%d", v);
    out_ += buf;
    return *this;
}

JsonWriter& JsonWriter::value(long long v) {
    separate();
    char buf[24];
    std::snprintf(buf, sizeof buf, "%lld", v);
    out_ += buf;
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    separate();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
    separate();
    append_escaped(out_, s);
    return *this;
}

JsonWriter& JsonWriter::value(const char* s) { return value(std::string_view(s)); }

JsonWriter& JsonWriter::value(cd z) {
    begin_array();
    value(z.real());
    value(z.imag());
    return end_array();
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("cannot open file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw invalid_input("read failed: " + path);
    return data;
}

void write_file_atomic(const std::string& path, std::string_view bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw invalid_input("cannot create file: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out.good()) throw invalid_input("write failed: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw invalid_input("cannot move " + tmp + " into place");
    }
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

const char* field_kind_name(FieldKind kind) {
    switch (kind) {
    case FieldKind::MU: return "mu";
    case FieldKind::F: return "f";
    case FieldKind::PSI: return "psi";
    }
    throw invalid_input("unknown field kind");
}

FieldKind field_kind_from(std::string_view name) {
    if (name == "mu") return FieldKind::MU;
    if (name == "f") return FieldKind::F;
    if (name == "psi") return FieldKind::PSI;
    throw invalid_input("field kind must be one of mu, f, psi");
}

std::string payload_path_for(const std::string& header_path) {
    const std::string suffix = ".json";
    if (header_path.size() <= suffix.size() ||
        header_path.compare(header_path.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw invalid_input("field header path must end in .json: " + header_path);
    return header_path.substr(0, header_path.size() - suffix.size()) + ".bin";
}

namespace {

void put_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_u64_le(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

} // namespace

void write_field(const std::string& header_path, const PeriodicField& field,
                 FieldKind kind) {
    validate_finite(field, "field payload");
    const std::string payload_path = payload_path_for(header_path);

    std::string payload;
    payload.reserve(field.values.size() * 16);
    for (const cd& v : field.values) {
        put_u64_le(payload, std::bit_cast<std::uint64_t>(v.real()));
        put_u64_le(payload, std::bit_cast<std::uint64_t>(v.imag()));
    }
    write_file_atomic(payload_path, payload);

    JsonWriter w;
    w.begin_object();
    w.key("version").value(1);
    w.key("n").value(field.grid.n);
    w.key("period").value(field.grid.period);
    w.key("kind").value(field_kind_name(kind));
    w.key("layout").value("row-major");
    w.key("encoding").value("f64le-interleaved");
    w.end_object();
    write_file_atomic(header_path, w.str() + "\n");
}

FieldFile read_field(const std::string& header_path) {
    const std::string header_text = read_file(header_path);
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(header_text);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("malformed field header: ") + e.what());
    }

    int n = 0;
    double period = 0.0;
    FieldKind kind = FieldKind::MU;
    try {
        auto require = [&](const char* name) -> const nlohmann::json& {
            if (!header.contains(name))
                throw invalid_input(std::string("field header missing key: ") + name);
            return header.at(name);
        };
        if (!require("version").is_number_integer() || require("version").get<int>() != 1)
            throw invalid_input("unsupported field file version");
        if (require("layout").get<std::string>() != "row-major")
            throw invalid_input("unsupported field layout");
        if (require("encoding").get<std::string>() != "f64le-interleaved")
            throw invalid_input("unsupported field encoding");
        if (!require("n").is_number_integer())
            throw invalid_input("field header n must be an integer");
        n = require("n").get<int>();
        period = require("period").get<double>();
        kind = field_kind_from(require("kind").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("malformed field header: ") + e.what());
    }

    PeriodicGrid grid(n, period);
    const std::string payload = read_file(payload_path_for(header_path));
    if (payload.size() != grid.size() * 16) {
        char buf[112];
        std::snprintf(buf, sizeof buf,
                      "payload size mismatch: %zu bytes for n = %d (expected %zu)",
                      payload.size(), n, grid.size() * 16);
        throw invalid_input(buf);
    }

    FieldFile file;
    file.kind = kind;
    file.field = PeriodicField(grid);
    const auto* p = reinterpret_cast<const unsigned char*>(payload.data());
    for (std::size_t i = 0; i < file.field.values.size(); ++i) {
        const double re = std::bit_cast<double>(get_u64_le(p + 16 * i));
        const double im = std::bit_cast<double>(get_u64_le(p + 16 * i + 8));
        file.field.values[i] = cd(re, im);
    }
    validate_finite(file.field, "field payload");
    return file;
}

} // namespace torun
