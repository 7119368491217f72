#include "hallmhd/io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace hallmhd {

static_assert(std::endian::native == std::endian::little,
              "field dumps are written in host order, which must be little-endian");

std::string dump_header(FieldKind kind, int n) {
  std::ostringstream os;
  os << "HALLFIELD v1 kind=" << to_string(kind) << " n=" << n
     << " order=x-fastest endian=little fp=64";
  return os.str();
}

template <FieldKind K>
void write_dump(std::ostream& os, const Field<K>& f) {
  os << dump_header(K, f.grid().n()) << '\n';
  const auto v = f.flat();
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!os) throw DumpError("failed to write field dump");
}

template <FieldKind K>
Field<K> read_dump(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw DumpError("missing dump header");
  std::istringstream hs(header);
  std::string magic, version, kind, nfield;
  hs >> magic >> version >> kind >> nfield;
  if (magic != "HALLFIELD" || version != "v1") throw DumpError("not a HALLFIELD v1 dump");
  if (kind != std::string("kind=") + to_string(K)) throw DumpError("dump kind mismatch: " + kind);
  if (nfield.rfind("n=", 0) != 0) throw DumpError("malformed n in dump header");
  const int n = std::stoi(nfield.substr(2));
  if (header != dump_header(K, n)) throw DumpError("unsupported dump header: " + header);
  Field<K> f{Grid(n)};
  auto v = f.flat();
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(v.size() * sizeof(double))) {
    throw DumpError("truncated field dump");
  }
  return f;
}

template <FieldKind K>
void write_dump(const std::filesystem::path& path, const Field<K>& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DumpError("cannot open " + path.string());
  write_dump(os, f);
}

template <FieldKind K>
Field<K> read_dump(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DumpError("cannot open " + path.string());
  return read_dump<K>(is);
}

#define HALLMHD_INSTANTIATE_IO(K)                                         \
  template void write_dump<K>(std::ostream&, const Field<K>&);            \
  template Field<K> read_dump<K>(std::istream&);                          \
  template void write_dump<K>(const std::filesystem::path&, const Field<K>&); \
  template Field<K> read_dump<K>(const std::filesystem::path&);

HALLMHD_INSTANTIATE_IO(FieldKind::Scalar)
HALLMHD_INSTANTIATE_IO(FieldKind::Face)
HALLMHD_INSTANTIATE_IO(FieldKind::Edge)

#undef HALLMHD_INSTANTIATE_IO

}  // namespace hallmhd
