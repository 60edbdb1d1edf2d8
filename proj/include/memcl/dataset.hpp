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

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace memcl {

/// Raised on any IDX parse failure; the message distinguishes wrong magic,
/// truncation, and image/label count mismatch.
class IdxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Images normalized to [0,1] (raw bytes / 255) with one label per image.
struct IdxDataset {
    int count = 0;
    int rows = 0;
    int cols = 0;
    std::vector<float> images;          // count * rows * cols
    std::vector<std::uint8_t> labels;   // count

    int pixels() const noexcept { return rows * cols; }
    std::span<const float> image(int index) const {
        return {images.data() + static_cast<std::size_t>(index) * static_cast<std::size_t>(pixels()),
                static_cast<std::size_t>(pixels())};
    }
};

/// Loads an IDX image/label file pair (the canonical MNIST / Fashion-MNIST
/// distribution format). Verifies the big-endian magics (0x00000803 images,
/// 0x00000801 labels), payload lengths, and that the two counts agree.
IdxDataset load_idx(const std::string& images_path, const std::string& labels_path);

}  // namespace memcl
