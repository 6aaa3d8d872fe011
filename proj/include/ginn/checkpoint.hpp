#pragma once

#include <filesystem>
#include <string>

#include "ginn/model.hpp"

namespace ginn {

/// Writes the model as a JSON document. Per layer: config, the original
/// adjacency in dictionary form, and flat parameter arrays — weights in
/// (k, l, i) lexicographic order, biases in (j, l) order. Keys keep
/// insertion order and doubles round-trip exactly, so the same model always
/// produces the same bytes.
void save_checkpoint(const GinnModel& model, const std::filesystem::path& path);

/// Serialized form of save_checkpoint, for callers composing larger files.
std::string checkpoint_to_string(const GinnModel& model);

/// Rebuilds a model from the checkpoint document. Shape or schema problems
/// raise CheckpointError. The loaded model reproduces the saved model's
/// predictions bit-for-bit.
GinnModel load_checkpoint(const std::filesystem::path& path);

GinnModel checkpoint_from_string(const std::string& text);

} // namespace ginn
