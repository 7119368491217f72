/// @file io.hpp
/// @brief Binary field dumps.
///
/// Format: one ASCII header line
///   HALLFIELD v1 kind=<scalar|face|edge> n=<n> order=x-fastest endian=little fp=64
/// followed by the raw little-endian doubles, components concatenated in
/// x, y, z order.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hallmhd/grid.hpp"

namespace hallmhd {

class DumpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string dump_header(FieldKind kind, int n);

template <FieldKind K>
void write_dump(std::ostream& os, const Field<K>& f);

template <FieldKind K>
Field<K> read_dump(std::istream& is);

template <FieldKind K>
void write_dump(const std::filesystem::path& path, const Field<K>& f);

template <FieldKind K>
Field<K> read_dump(const std::filesystem::path& path);

}  // namespace hallmhd
