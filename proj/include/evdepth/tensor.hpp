#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "evdepth/types.hpp"

namespace evdepth {

enum class TensorKind { Voxel, Cstr, Tore, Generic };

// Dense C x H x W grid, row-major, produced by a representation builder.
// Values are kept in double precision internally; the TSR1 file format
// stores float32.
struct RepTensor {
    std::size_t channels = 0;
    std::size_t height = 0;
    std::size_t width = 0;
    TensorKind kind = TensorKind::Generic;
    std::vector<double> data;

    RepTensor() = default;
    RepTensor(std::size_t c, std::size_t h, std::size_t w,
              TensorKind k = TensorKind::Generic)
        : channels(c), height(h), width(w), kind(k), data(c * h * w, 0.0) {}

    [[nodiscard]] std::size_t size() const { return data.size(); }
    [[nodiscard]] std::size_t plane() const { return height * width; }

    double& at(std::size_t c, std::size_t y, std::size_t x) {
        return data[(c * height + y) * width + x];
    }
    [[nodiscard]] double at(std::size_t c, std::size_t y, std::size_t x) const {
        return data[(c * height + y) * width + x];
    }
};

// TSR1 container: 'T','S','R','1', u8 ndim, ndim x u32 dims (little-endian),
// then f32 values row-major.
std::vector<std::uint8_t> write_tsr1(const std::vector<std::uint32_t>& dims,
                                     const std::vector<float>& values);

struct Tsr1Payload {
    std::vector<std::uint32_t> dims;
    std::vector<float> values;
};

Tsr1Payload parse_tsr1(const std::uint8_t* bytes, std::size_t len);

// Typed wrappers. Doubles are narrowed to f32 on write.
std::vector<std::uint8_t> tensor_to_tsr1(const RepTensor& t);
RepTensor tensor_from_tsr1(const std::uint8_t* bytes, std::size_t len);

std::vector<std::uint8_t> depth_to_tsr1(const DepthMap& d);
DepthMap depth_from_tsr1(const std::uint8_t* bytes, std::size_t len);

std::vector<std::uint8_t> mask_to_tsr1(const ValidMask& m);
ValidMask mask_from_tsr1(const std::uint8_t* bytes, std::size_t len);

// File helpers.
void save_bytes(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> load_bytes(const std::filesystem::path& path);

void save_tensor(const std::filesystem::path& path, const RepTensor& t);
RepTensor load_tensor(const std::filesystem::path& path);
void save_depth(const std::filesystem::path& path, const DepthMap& d);
DepthMap load_depth(const std::filesystem::path& path);
void save_mask(const std::filesystem::path& path, const ValidMask& m);
ValidMask load_mask(const std::filesystem::path& path);

}  // namespace evdepth
