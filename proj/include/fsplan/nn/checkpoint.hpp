#pragma once

#include "fsplan/nn/adamw.hpp"
#include "fsplan/nn/network.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fsplan::nn {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Extra named payloads appended after the network (4-character tags).
using Sections = std::map<std::string, std::vector<std::uint8_t>>;

struct Checkpoint {
  Network<float> net;
  std::optional<AdamW> optimizer;
  Sections sections;
};

/// Layout: "CFNN", u32 version, u32 layer count, per layer (u8 kind, u8
/// activation, u32 in, u32 hidden, u32 out), float32 parameters in layer
/// order (matrices row-major), u8 optimizer flag [+ state], u32 section
/// count, then per section a 4-byte tag, u64 length and the payload.
void save_checkpoint(const std::filesystem::path& path, const Network<float>& net,
                     const AdamW* optimizer = nullptr, const Sections& sections = {});
Checkpoint load_checkpoint(const std::filesystem::path& path);

void write_checkpoint(std::ostream& os, const Network<float>& net, const AdamW* optimizer,
                      const Sections& sections);
Checkpoint read_checkpoint(std::istream& is);

}  // namespace fsplan::nn
