#pragma once

#include <string>

#include "attnet/train.hpp"

namespace attnet {

enum class Usage { Training, PublicTest, All };

Usage usage_from_name(const std::string& name);

/// Parses the `emotion,pixels,Usage` CSV grammar: 2304 space-separated
/// integers in [0,255] per row (48x48 grayscale), labels 0-6. Pixel values
/// are scaled by 1/255. Malformed rows raise ParseError carrying the
/// 1-based data-row index (the header is row 0).
DatasetBatch load_fer2013_csv(const std::string& path, Usage filter);

/// Inverse of the loader; together they round-trip bit-exactly.
void save_fer2013_csv(const DatasetBatch& batch, const std::string& path);

/// Loads root/<class>/<file>.pgm (binary P5, maxval 255 only); class index
/// follows sorted subdirectory order. Images are resized to target_h x
/// target_w so they stack into one batch.
DatasetBatch load_pgm_dir(const std::string& root, int target_h = 80, int target_w = 80);

/// Bilinear resize with the half-pixel sampling rule src = (dst+0.5)*scale
/// - 0.5 (clamped), then optional 1->3 channel replication. Resizing to
/// the input size is an exact copy, so the op is idempotent at target.
Tensor preprocess(const Tensor& images, int target_h = 80, int target_w = 80, int channels = 0);

/// Class k is a Gaussian blob at a class-specific position plus N(0,sigma)
/// noise, clipped to [0,1]; single channel, deterministic per seed.
DatasetBatch synthetic_dataset(int classes, int per_class, int h, int w, uint64_t seed,
                               double noise_sigma = 0.1);

}  // namespace attnet
