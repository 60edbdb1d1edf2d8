/*
 * Copyright 2026 memcl contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "memcl/dataset.hpp"

#include <fstream>

namespace memcl {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::ifstream& in, const std::string& path, const char* what) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
        throw IdxError(path + ": truncated while reading " + what);
    }
    return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
           (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

std::ifstream open_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IdxError("cannot open file: " + path);
    return in;
}

}  // namespace

IdxDataset load_idx(const std::string& images_path, const std::string& labels_path) {
    auto images_in = open_binary(images_path);
    const auto image_magic = read_be32(images_in, images_path, "magic");
    if (image_magic != kImageMagic) {
        throw IdxError(images_path + ": magic mismatch, expected 0x00000803 (images), got 0x" +
                       [&] {
                           char buf[16];
                           std::snprintf(buf, sizeof buf, "%08x", image_magic);
                           return std::string(buf);
                       }());
    }
    const auto image_count = read_be32(images_in, images_path, "image count");
    const auto rows = read_be32(images_in, images_path, "row count");
    const auto cols = read_be32(images_in, images_path, "column count");

    auto labels_in = open_binary(labels_path);
    const auto label_magic = read_be32(labels_in, labels_path, "magic");
    if (label_magic != kLabelMagic) {
        throw IdxError(labels_path + ": magic mismatch, expected 0x00000801 (labels), got 0x" +
                       [&] {
                           char buf[16];
                           std::snprintf(buf, sizeof buf, "%08x", label_magic);
                           return std::string(buf);
                       }());
    }
    const auto label_count = read_be32(labels_in, labels_path, "label count");

    if (image_count != label_count) {
        throw IdxError("image/label count mismatch: " + images_path + " has " +
                       std::to_string(image_count) + " images but " + labels_path + " has " +
                       std::to_string(label_count) + " labels");
    }

    IdxDataset ds;
    ds.count = static_cast<int>(image_count);
    ds.rows = static_cast<int>(rows);
    ds.cols = static_cast<int>(cols);

    const std::size_t pixel_bytes =
        static_cast<std::size_t>(image_count) * rows * cols;
    std::vector<std::uint8_t> raw(pixel_bytes);
    if (!images_in.read(reinterpret_cast<char*>(raw.data()),
                        static_cast<std::streamsize>(pixel_bytes))) {
        const auto got = static_cast<std::size_t>(images_in.gcount());
        throw IdxError(images_path + ": truncated payload, expected " +
                       std::to_string(pixel_bytes) + " pixel bytes, got " + std::to_string(got));
    }
    ds.images.resize(pixel_bytes);
    for (std::size_t i = 0; i < pixel_bytes; ++i) {
        ds.images[i] = static_cast<float>(raw[i]) / 255.0f;
    }

    ds.labels.resize(label_count);
    if (!labels_in.read(reinterpret_cast<char*>(ds.labels.data()),
                        static_cast<std::streamsize>(label_count))) {
        const auto got = static_cast<std::size_t>(labels_in.gcount());
        throw IdxError(labels_path + ": truncated payload, expected " +
                       std::to_string(label_count) + " label bytes, got " + std::to_string(got));
    }
    return ds;
}

}  // namespace memcl
