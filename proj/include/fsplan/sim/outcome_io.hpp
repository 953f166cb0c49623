#pragma once

#include "fsplan/sim/simulation.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fsplan::sim {

struct OutcomeRecord {
  Scenario scenario;
  SimOutcome outcome;
};

/// Routes packed as 2 bits each: intruder spawn, intruder destination, ego destination.
std::uint8_t pack_scenario(const Scenario& sc);
Scenario unpack_scenario(std::uint8_t code);

/// Batch file: "CFSO", u32 version, u32 count, then per record a scenario
/// byte, 24x8 float32 snapshot values (ego x,y,vx,vy then intruder), float32
/// robustness and a collided byte. Only full-horizon outcomes are accepted.
void write_outcomes(const std::filesystem::path& path, std::span<const OutcomeRecord> records);
std::vector<OutcomeRecord> read_outcomes(const std::filesystem::path& path);
void write_outcomes_csv(const std::filesystem::path& path, std::span<const OutcomeRecord> records);

inline constexpr std::uint32_t kOutcomeFormatVersion = 1;

}  // namespace fsplan::sim
