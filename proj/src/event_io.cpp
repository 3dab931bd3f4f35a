#include "evdepth/event_io.hpp"

#include <charconv>
#include <cstring>
#include <string>
#include <string_view>

#include "evdepth/errors.hpp"
#include "evdepth/tensor.hpp"

namespace evdepth {

namespace {

constexpr std::size_t kHeaderBytes = 16;  // magic + W + H + count
constexpr std::size_t kRecordBytes = 16;

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void check_record(EventStream& s, const Event& e, std::size_t index) {
    if (e.x >= s.width) throw BadRecord(index, "x out of bounds");
    if (e.y >= s.height) throw BadRecord(index, "y out of bounds");
    if (e.p != 1 && e.p != -1) throw BadRecord(index, "polarity not in {-1,+1}");
    if (!s.events.empty() && e.t < s.events.back().t)
        throw NonMonotonicTimestamp(index);
    s.events.push_back(e);
}

EventStream parse_binary(const std::uint8_t* bytes, std::size_t len) {
    if (len < kHeaderBytes) throw MalformedHeader("EVT1 file shorter than header");
    if (bytes[0] != 'E' || bytes[1] != 'V' || bytes[2] != 'T' || bytes[3] != '1')
        throw MalformedHeader("bad EVT1 magic");
    EventStream s;
    s.width = get_u16(bytes + 4);
    s.height = get_u16(bytes + 6);
    const std::uint64_t count = get_u64(bytes + 8);
    if (len != kHeaderBytes + count * kRecordBytes)
        throw MalformedHeader("EVT1 size does not match record count");
    s.events.reserve(count);
    const std::uint8_t* p = bytes + kHeaderBytes;
    for (std::uint64_t i = 0; i < count; ++i, p += kRecordBytes) {
        Event e;
        e.x = get_u16(p);
        e.y = get_u16(p + 2);
        e.t = get_u64(p + 4);
        e.p = static_cast<std::int8_t>(p[12]);
        check_record(s, e, i);
    }
    return s;
}

long long parse_int_field(std::string_view field, std::size_t rec,
                          const char* name) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw BadRecord(rec, std::string("cannot parse field ") + name);
    return v;
}

EventStream parse_csv(const std::uint8_t* bytes, std::size_t len,
                      std::uint16_t width, std::uint16_t height) {
    std::string_view text(reinterpret_cast<const char*>(bytes), len);
    EventStream s;
    s.width = width;
    s.height = height;

    std::size_t pos = 0;
    auto next_line = [&]() -> std::string_view {
        if (pos >= text.size()) return {};
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    };

    std::string_view header = next_line();
    if (header != "x,y,t,p") throw MalformedHeader("CSV header must be x,y,t,p");

    std::size_t rec = 0;
    while (pos <= text.size()) {
        std::string_view line = next_line();
        if (line.empty()) {
            if (pos >= text.size()) break;
            throw BadRecord(rec, "empty line");
        }
        std::string_view fields[4];
        std::size_t start = 0;
        int nf = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (nf >= 4) throw BadRecord(rec, "too many fields");
                fields[nf++] = line.substr(start, i - start);
                start = i + 1;
            }
        }
        if (nf != 4) throw BadRecord(rec, "expected 4 fields");
        const long long x = parse_int_field(fields[0], rec, "x");
        const long long y = parse_int_field(fields[1], rec, "y");
        const long long t = parse_int_field(fields[2], rec, "t");
        const long long p = parse_int_field(fields[3], rec, "p");
        if (x < 0 || x > 0xFFFF) throw BadRecord(rec, "x out of bounds");
        if (y < 0 || y > 0xFFFF) throw BadRecord(rec, "y out of bounds");
        if (t < 0) throw BadRecord(rec, "negative timestamp");
        if (p != 1 && p != -1) throw BadRecord(rec, "polarity not in {-1,+1}");
        Event e{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                static_cast<std::uint64_t>(t), static_cast<std::int8_t>(p)};
        check_record(s, e, rec);
        ++rec;
    }
    return s;
}

}  // namespace

EventStream parse_events(const std::uint8_t* bytes, std::size_t len,
                         EventFormat format, std::uint16_t csv_width,
                         std::uint16_t csv_height) {
    if (format == EventFormat::Binary) return parse_binary(bytes, len);
    if (csv_width == 0 || csv_height == 0)
        throw MalformedHeader("CSV parsing requires declared geometry");
    return parse_csv(bytes, len, csv_width, csv_height);
}

EventStream parse_events(const std::vector<std::uint8_t>& bytes,
                         EventFormat format, std::uint16_t csv_width,
                         std::uint16_t csv_height) {
    return parse_events(bytes.data(), bytes.size(), format, csv_width,
                        csv_height);
}

std::vector<std::uint8_t> write_events(const EventStream& stream,
                                       EventFormat format) {
    std::vector<std::uint8_t> out;
    if (format == EventFormat::Binary) {
        out.reserve(kHeaderBytes + stream.events.size() * kRecordBytes);
        out.push_back('E');
        out.push_back('V');
        out.push_back('T');
        out.push_back('1');
        put_u16(out, stream.width);
        put_u16(out, stream.height);
        put_u64(out, stream.events.size());
        for (const Event& e : stream.events) {
            put_u16(out, e.x);
            put_u16(out, e.y);
            put_u64(out, e.t);
            out.push_back(static_cast<std::uint8_t>(e.p));
            out.push_back(0);
            out.push_back(0);
            out.push_back(0);
        }
        return out;
    }
    std::string text = "x,y,t,p\n";
    for (const Event& e : stream.events) {
        text += std::to_string(e.x);
        text += ',';
        text += std::to_string(e.y);
        text += ',';
        text += std::to_string(e.t);
        text += ',';
        text += std::to_string(static_cast<int>(e.p));
        text += '\n';
    }
    out.assign(text.begin(), text.end());
    return out;
}

EventFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? EventFormat::Csv : EventFormat::Binary;
}

EventStream load_events(const std::filesystem::path& path,
                        std::uint16_t csv_width, std::uint16_t csv_height) {
    auto bytes = load_bytes(path);
    return parse_events(bytes, format_from_path(path), csv_width, csv_height);
}

void save_events(const std::filesystem::path& path, const EventStream& stream) {
    save_bytes(path, write_events(stream, format_from_path(path)));
}

}  // namespace evdepth
