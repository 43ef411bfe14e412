#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "torun/grid.hpp"

namespace torun {

// Streaming JSON emitter with caller-controlled key order and fixed %.17g
// numeric formatting, so identical data serializes to identical bytes.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(long long v);
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view s);
    JsonWriter& value(const char* s);
    JsonWriter& value(cd z); // two-element array [re, im]

    const std::string& str() const { return out_; }

private:
    void separate();

    std::string out_;
    std::vector<int> counts_;
    bool pending_key_ = false;
};

// %.17g rendering used for every numeric field in reports and headers.
std::string format_double(double v);

// Whole-file helpers; writes go through a temp file and rename.
std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view bytes);

// FNV-1a 64-bit hash, used for golden-image fingerprints in tests.
std::uint64_t fnv1a64(std::string_view bytes);

enum class FieldKind { MU, F, PSI };

const char* field_kind_name(FieldKind kind);
FieldKind field_kind_from(std::string_view name);

struct FieldFile {
    FieldKind kind = FieldKind::MU;
    PeriodicField field;
};

// The header path must end in ".json"; the payload lives next to it under
// ".bin" as n*n complex samples, little-endian doubles, real then imaginary,
// row-major (16 bytes per sample).
std::string payload_path_for(const std::string& header_path);

void write_field(const std::string& header_path, const PeriodicField& field,
                 FieldKind kind);
FieldFile read_field(const std::string& header_path);

} // namespace torun
