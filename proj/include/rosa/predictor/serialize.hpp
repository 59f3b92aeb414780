#pragma once

#include <iosfwd>
#include <string>

#include "rosa/predictor/model.hpp"

namespace rosa {

inline constexpr std::uint32_t kParamFormatVersion = 1;

/// "ROSA", u32 version, u64 header length, JSON header (config and tensor
/// table), u64 value count, little-endian f64 values in declaration order.
void write_parameters(std::ostream& os, const ModelParameters& p);
/// Throws BadFormat on any mismatch.
ModelParameters read_parameters(std::istream& is);

void save_parameters(const std::string& path, const ModelParameters& p);
ModelParameters load_parameters(const std::string& path);

}  // namespace rosa
