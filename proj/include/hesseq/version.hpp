#pragma once

namespace hesseq {

// Build identifier written into every report's reproducibility block.
inline constexpr const char* kVersion = "hesseq 0.1.0";
inline constexpr const char* kReportSchema = "hesseq-report-v1";

}  // namespace hesseq
