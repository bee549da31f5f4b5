#include "qbe/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <vector>

namespace qbe {

namespace {

constexpr char kMagic[5] = {'B', 'E', 'D', 'L', '1'};

void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) buf.push_back((unsigned char)(v >> (8 * k)));
}
void put_f64(std::vector<unsigned char>& buf, double d) {
  put_u64(buf, std::bit_cast<std::uint64_t>(d));
}
std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= std::uint64_t(p[k]) << (8 * k);
  return v;
}
double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};

}  // namespace

void save_checkpoint(const std::string& path, VecField& u, QField& q, double t) {
  if (!(u.grid() == q.grid()))
    throw CheckpointError("checkpoint: u and Q live on different grids");
  const PeriodicGrid g = u.grid();
  u.sync_real();
  q.sync_real();

  std::vector<unsigned char> head;
  head.insert(head.end(), kMagic, kMagic + 5);
  put_u64(head, std::uint64_t(g.n));
  put_f64(head, g.L);
  put_f64(head, t);

  const std::string tmp = path + ".tmp";
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(tmp.c_str(), "wb"));
  if (!f) throw CheckpointError("checkpoint: cannot open " + tmp);

  const auto put_component = [&](std::span<const double> comp) {
    std::vector<unsigned char> buf;
    buf.reserve(comp.size() * 8);
    for (double d : comp) put_f64(buf, d);
    if (std::fwrite(buf.data(), 1, buf.size(), f.get()) != buf.size())
      throw CheckpointError("checkpoint: short write to " + tmp);
  };

  if (std::fwrite(head.data(), 1, head.size(), f.get()) != head.size())
    throw CheckpointError("checkpoint: short write to " + tmp);
  for (int c = 0; c < 3; ++c) put_component(u.real(c));
  for (int c = 0; c < 5; ++c) put_component(q.real(c));
  if (std::fflush(f.get()) != 0) throw CheckpointError("checkpoint: flush failed");
  f.reset();
  std::filesystem::rename(tmp, path);
}

Snapshot load_checkpoint(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "rb"));
  if (!f) throw CheckpointError("checkpoint: cannot open " + path);

  unsigned char head[5 + 8 + 8 + 8];
  if (std::fread(head, 1, sizeof head, f.get()) != sizeof head)
    throw CheckpointError("checkpoint: truncated header in " + path);
  for (int k = 0; k < 5; ++k)
    if (head[k] != (unsigned char)kMagic[k])
      throw CheckpointError("checkpoint: bad magic in " + path);

  const std::uint64_t n64 = get_u64(head + 5);
  PeriodicGrid g{int(n64), get_f64(head + 13)};
  const double t = get_f64(head + 21);
  if (n64 > 4096 || !g.valid())
    throw CheckpointError("checkpoint: invalid grid header in " + path);

  Snapshot snap{g, t, VecField(g), QField(g)};
  std::vector<unsigned char> buf(g.n_real() * 8);
  const auto get_component = [&](std::span<double> comp) {
    if (std::fread(buf.data(), 1, buf.size(), f.get()) != buf.size())
      throw CheckpointError("checkpoint: truncated data in " + path);
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = get_f64(buf.data() + 8 * i);
  };
  for (int c = 0; c < 3; ++c) get_component(snap.u.real_overwrite(c));
  for (int c = 0; c < 5; ++c) get_component(snap.q.real_overwrite(c));
  if (std::fgetc(f.get()) != EOF)
    throw CheckpointError("checkpoint: trailing bytes in " + path);
  return snap;
}

}  // namespace qbe
