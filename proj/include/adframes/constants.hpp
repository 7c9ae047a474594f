#pragma once

namespace adframes {

// Units convention: hbar = 1, time in microseconds, angular frequency in
// rad/us. 1 MHz of ordinary frequency equals 2*pi rad/us.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline constexpr double angular_from_mhz(double mhz) { return kTwoPi * mhz; }

} // namespace adframes
