#include "evdepth/tensor.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "evdepth/errors.hpp"

namespace evdepth {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

struct Reader {
    const std::uint8_t* p;
    std::size_t left;

    std::uint8_t u8() {
        if (left < 1) throw MalformedHeader("truncated TSR1 data");
        --left;
        return *p++;
    }
    std::uint32_t u32() {
        if (left < 4) throw MalformedHeader("truncated TSR1 data");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        p += 4;
        left -= 4;
        return v;
    }
    float f32() {
        std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
};

}  // namespace

std::vector<std::uint8_t> write_tsr1(const std::vector<std::uint32_t>& dims,
                                     const std::vector<float>& values) {
    std::size_t expect = 1;
    for (auto d : dims) expect *= d;
    if (expect != values.size())
        throw OutOfRange("TSR1 dims do not match value count");

    std::vector<std::uint8_t> out;
    out.reserve(5 + 4 * dims.size() + 4 * values.size());
    put_u8(out, 'T');
    put_u8(out, 'S');
    put_u8(out, 'R');
    put_u8(out, '1');
    put_u8(out, static_cast<std::uint8_t>(dims.size()));
    for (auto d : dims) put_u32(out, d);
    for (float v : values) put_f32(out, v);
    return out;
}

Tsr1Payload parse_tsr1(const std::uint8_t* bytes, std::size_t len) {
    Reader r{bytes, len};
    if (len < 5 || r.u8() != 'T' || r.u8() != 'S' || r.u8() != 'R' ||
        r.u8() != '1')
        throw MalformedHeader("bad TSR1 magic");
    const std::size_t ndim = r.u8();
    Tsr1Payload out;
    out.dims.resize(ndim);
    std::size_t count = 1;
    for (std::size_t i = 0; i < ndim; ++i) {
        out.dims[i] = r.u32();
        count *= out.dims[i];
    }
    if (r.left != 4 * count)
        throw MalformedHeader("TSR1 payload size mismatch");
    out.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.values[i] = r.f32();
        if (!std::isfinite(out.values[i]))
            throw BadRecord(i, "non-finite tensor value");
    }
    return out;
}

std::vector<std::uint8_t> tensor_to_tsr1(const RepTensor& t) {
    std::vector<float> vals(t.data.begin(), t.data.end());
    return write_tsr1({static_cast<std::uint32_t>(t.channels),
                       static_cast<std::uint32_t>(t.height),
                       static_cast<std::uint32_t>(t.width)},
                      vals);
}

RepTensor tensor_from_tsr1(const std::uint8_t* bytes, std::size_t len) {
    Tsr1Payload p = parse_tsr1(bytes, len);
    if (p.dims.size() != 3)
        throw MalformedHeader("expected 3-dimensional tensor");
    RepTensor t(p.dims[0], p.dims[1], p.dims[2]);
    t.data.assign(p.values.begin(), p.values.end());
    return t;
}

std::vector<std::uint8_t> depth_to_tsr1(const DepthMap& d) {
    std::vector<float> vals(d.values.begin(), d.values.end());
    return write_tsr1({static_cast<std::uint32_t>(d.height),
                       static_cast<std::uint32_t>(d.width)},
                      vals);
}

DepthMap depth_from_tsr1(const std::uint8_t* bytes, std::size_t len) {
    Tsr1Payload p = parse_tsr1(bytes, len);
    if (p.dims.size() != 2)
        throw MalformedHeader("expected 2-dimensional depth map");
    DepthMap d(p.dims[0], p.dims[1]);
    d.values.assign(p.values.begin(), p.values.end());
    return d;
}

std::vector<std::uint8_t> mask_to_tsr1(const ValidMask& m) {
    std::vector<float> vals(m.data.size());
    for (std::size_t i = 0; i < m.data.size(); ++i)
        vals[i] = m.data[i] ? 1.0f : 0.0f;
    return write_tsr1({static_cast<std::uint32_t>(m.height),
                       static_cast<std::uint32_t>(m.width)},
                      vals);
}

ValidMask mask_from_tsr1(const std::uint8_t* bytes, std::size_t len) {
    Tsr1Payload p = parse_tsr1(bytes, len);
    if (p.dims.size() != 2)
        throw MalformedHeader("expected 2-dimensional mask");
    ValidMask m(p.dims[0], p.dims[1]);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        m.data[i] = p.values[i] != 0.0f ? 1 : 0;
    return m;
}

void save_bytes(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorKind::Data, "cannot open for write: " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error(ErrorKind::Data, "write failed: " + path.string());
}

std::vector<std::uint8_t> load_bytes(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::Data, "cannot open: " + path.string());
    f.seekg(0, std::ios::end);
    const auto size = f.tellg();
    f.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    f.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!f) throw Error(ErrorKind::Data, "read failed: " + path.string());
    return bytes;
}

void save_tensor(const std::filesystem::path& path, const RepTensor& t) {
    save_bytes(path, tensor_to_tsr1(t));
}

RepTensor load_tensor(const std::filesystem::path& path) {
    auto b = load_bytes(path);
    return tensor_from_tsr1(b.data(), b.size());
}

void save_depth(const std::filesystem::path& path, const DepthMap& d) {
    save_bytes(path, depth_to_tsr1(d));
}

DepthMap load_depth(const std::filesystem::path& path) {
    auto b = load_bytes(path);
    return depth_from_tsr1(b.data(), b.size());
}

void save_mask(const std::filesystem::path& path, const ValidMask& m) {
    save_bytes(path, mask_to_tsr1(m));
}

ValidMask load_mask(const std::filesystem::path& path) {
    auto b = load_bytes(path);
    return mask_from_tsr1(b.data(), b.size());
}

}  // namespace evdepth
