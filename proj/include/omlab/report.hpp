#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace omlab::report {

// Canonical numeric wire format: 10 significant digits ("%.10g").  Every
// CSV field and JSON number the tool emits goes through this so identical
// runs produce byte-identical outputs.
std::string num(double x);

std::string csv_row(const std::vector<std::string>& fields);

// FNV-1a 64-bit digest, hex-encoded; manifests record output digests so a
// replay can assert byte-identical regeneration.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t h);

} // namespace omlab::report
