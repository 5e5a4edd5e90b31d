#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "drrs/harness.h"

namespace drrs::trace_io {

inline constexpr std::string_view kCsvHeader =
    "t,phi_v,phi_h,phi_v_dot,phi_h_dot,r_v,r_h,omega_a,omega_b,M_v,M_h,"
    "theta_hat_1,theta_hat_2,theta_hat_3,theta_hat_4,theta_hat_5,theta_hat_6,q_1,q_2";

/// Header plus one row per trace entry, 17 significant digits, LF endings.
void write_trace_csv(const harness::Trace& trace, std::ostream& out);

/// Throws std::runtime_error naming the path on IO failure.
void write_trace_csv(const harness::Trace& trace, const std::filesystem::path& path);

/// Inverse of write_trace_csv; rejects files whose header differs.
harness::Trace read_trace_csv(const std::filesystem::path& path);

}  // namespace drrs::trace_io
