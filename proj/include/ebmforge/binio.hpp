#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

// Little-endian primitives shared by the reservoir and checkpoint formats.
namespace ebmforge::binio {

inline void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32(std::istream& is, const char* what) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error(std::string(what) + ": truncated stream");
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
  write_u32(os, static_cast<std::uint32_t>(v));
  write_u32(os, static_cast<std::uint32_t>(v >> 32));
}

inline std::uint64_t read_u64(std::istream& is, const char* what) {
  std::uint64_t lo = read_u32(is, what);
  std::uint64_t hi = read_u32(is, what);
  return lo | hi << 32;
}

inline void write_f64(std::ostream& os, double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, 8);
  write_u64(os, u);
}

inline double read_f64(std::istream& is, const char* what) {
  std::uint64_t u = read_u64(is, what);
  double v;
  std::memcpy(&v, &u, 8);
  return v;
}

inline void write_vec(std::ostream& os, const Eigen::VectorXd& v) {
  write_u32(os, static_cast<std::uint32_t>(v.size()));
  for (long i = 0; i < v.size(); ++i) write_f64(os, v[i]);
}

inline Eigen::VectorXd read_vec(std::istream& is, const char* what) {
  long n = static_cast<long>(read_u32(is, what));
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = read_f64(is, what);
  return v;
}

inline void write_string(std::ostream& os, const std::string& s) {
  write_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& is, const char* what) {
  std::string s(read_u32(is, what), '\0');
  is.read(s.data(), static_cast<std::streamsize>(s.size()));
  if (!is) throw std::runtime_error(std::string(what) + ": truncated stream");
  return s;
}

}  // namespace ebmforge::binio
