#ifndef MIRRORNET_MODEL_IO_HPP
#define MIRRORNET_MODEL_IO_HPP

#include <filesystem>

#include "mirrornet/network.hpp"

namespace mirrornet {

// Model file, UTF-8 text:
//   line 1: `MMNN 1`
//   line 2: layer sizes, space-separated
//   per non-input layer: `W <rows> <cols>` followed by <rows> lines of
//   <cols> numbers, then `B <len>` and one line of <len> numbers.
// Numbers carry 17 significant digits, so load(save(net)) reproduces the
// network bit-for-bit.
void save_model(const Network& net, const std::filesystem::path& path);

// Throws IoFailure if unreadable, FormatError (with a line number) on
// malformed content.
Network load_model(const std::filesystem::path& path);

} // namespace mirrornet

#endif // MIRRORNET_MODEL_IO_HPP
