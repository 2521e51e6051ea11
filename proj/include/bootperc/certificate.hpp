#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bootperc/difficulty.hpp"
#include "bootperc/dynamics.hpp"
#include "bootperc/family.hpp"

namespace bootperc {

inline constexpr std::string_view kCertificateFormat = "bootperc-certificate/1";

// JSON document holding the family, one entry per direction result (value,
// status, witness, growth certificate, exhaustion record) and optionally the
// family-level value.
std::string write_certificate(const UpdateFamily& family, std::span<const DifficultyResult> results,
                              const FamilyDifficultyResult* family_result = nullptr);

void write_certificate_file(const std::string& path, const UpdateFamily& family,
                            std::span<const DifficultyResult> results,
                            const FamilyDifficultyResult* family_result = nullptr);

struct CertificateCheck {
  bool ok = false;
  std::size_t entries = 0;
  std::size_t witnesses_replayed = 0;
  std::vector<std::string> messages;
};

// Re-checks every entry against `family`: the digest, the stability type
// behind 0 and infinite values, and a replay of every witness certificate.
// Exhaustion records are reported, not re-enumerated. Throws ParseError on
// malformed documents.
CertificateCheck verify_certificate(const UpdateFamily& family, std::string_view text,
                                    std::int64_t step_budget = 1 << 20);
CertificateCheck verify_certificate_file(const UpdateFamily& family, const std::string& path,
                                         std::int64_t step_budget = 1 << 20);

}  // namespace bootperc
